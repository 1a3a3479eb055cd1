from typing import List, Literal, Optional, Tuple, get_args

from pydantic import BaseModel, ConfigDict, Field, model_validator

from hypergeo.numeric import GaussianRational, parse_complex
from hypergeo.series import METHODS, HyperParams

# ---------- Subcomandos / formatos ----------
Subcommand = Literal["eval", "expand", "bench", "selftest"]
OutputFormat = Literal["text", "json", "csv"]
SUBCOMMANDS: Tuple[str, ...] = get_args(Subcommand)
OUTPUT_FORMATS: Tuple[str, ...] = get_args(OutputFormat)


class CliRequest(BaseModel):
    subcommand: Subcommand
    upper: str = ""
    lower: str = ""
    z: Optional[str] = None
    digits: int = Field(default=30, ge=1)
    terms: Optional[int] = Field(default=None, ge=0)
    method: Optional[str] = None
    output: OutputFormat = "text"

    # No permitir campos inesperados
    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def _parse_eagerly(self) -> "CliRequest":
        # ParseError sale tal cual (no es ValueError), con la posicion
        if self.subcommand in ("eval", "expand"):
            HyperParams.parse(self.upper, self.lower)
        if self.z is not None:
            parse_complex(self.z)
        if self.method is not None and self.method not in METHODS + ("recurrence", "limit"):
            raise ValueError(f"unknown method: {self.method}")
        return self

    @property
    def params(self) -> HyperParams:
        return HyperParams.parse(self.upper, self.lower)

    @property
    def z_value(self) -> GaussianRational:
        return parse_complex(self.z or "0")


# ---------- Dumps (json round trip) ----------

class SeriesDump(BaseModel):
    alpha: str
    logdeg: int = Field(ge=1)
    # coeffs[i][j] = (re, im) como strings decimales
    coeffs: List[List[Tuple[str, str]]]

    model_config = ConfigDict(extra="forbid")


class ExpansionDump(BaseModel):
    upper: List[str]
    lower: List[str] = Field(default_factory=list)
    N: int = Field(ge=0)
    bits: int = Field(ge=64)
    series: List[SeriesDump]

    model_config = ConfigDict(extra="forbid")


class ReferenceRecord(BaseModel):
    case: str
    upper: List[str]
    lower: List[str] = Field(default_factory=list)
    z: str
    value_re: str
    value_im: str
    source: str
    digits: int = Field(ge=1)
    normative: bool = True

    model_config = ConfigDict(extra="forbid")
