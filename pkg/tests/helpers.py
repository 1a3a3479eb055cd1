from fractions import Fraction

from hypergeo.numeric import GaussianRational


def gz(re, im=0) -> GaussianRational:
    return GaussianRational(Fraction(re), Fraction(im))


def close(a, b, tol) -> bool:
    return abs(a - b) <= tol
