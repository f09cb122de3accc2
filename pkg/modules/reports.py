# modules/reports.py
"""Report models. Every report renders as ``key: value`` text and as JSON via pydantic."""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

Verdict = Literal["NonFiberedCertificate", "NonMonic", "NoObstructionFound"]


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


class KnotTableEntry(BaseModel):
    """One row of the shipped knot table."""
    name: str
    braid: List[int] = Field(default_factory=list)
    pd: str = ""
    seifert: List[List[int]] = Field(default_factory=list)
    genus: Optional[int] = None
    fibered: bool = False
    note: str = ""

    @model_validator(mode="after")
    def _default_genus(self):
        # a Seifert matrix of size 2h bounds the genus by h
        if self.genus is None:
            self.genus = len(self.seifert) // 2
        return self

    def to_text(self) -> str:
        lines = [f"name: {self.name}",
                 f"braid: {' '.join(str(s) for s in self.braid)}",
                 f"pd: {self.pd}",
                 f"seifert: {';'.join(' '.join(str(v) for v in row) for row in self.seifert)}",
                 f"genus: {self.genus}",
                 f"fibered: {_yes(self.fibered)}"]
        return "\n".join(lines)


class AlexanderReport(BaseModel):
    knot: str
    delta: str
    monic: bool
    source: Literal["fox", "seifert"] = "fox"

    def to_text(self) -> str:
        return self.delta


class TwistedAlexanderReport(BaseModel):
    knot: str
    group: str
    index: int
    images: List[str]
    polynomial: str
    minor_gcd: str
    deleted_generator: int
    correction_exact: bool
    vanishes: bool

    def to_text(self) -> str:
        return "\n".join([self.polynomial,
                          f"deleted_generator: {self.deleted_generator}",
                          f"correction_exact: {_yes(self.correction_exact)}"])


class EpimorphismRecord(BaseModel):
    """One epimorphism tried by the obstruction search."""
    group: str
    index: int
    images: List[str]
    twisted_delta: Optional[str] = None
    vanishing: bool
    expanded: bool
    columns: int

    def to_text(self) -> str:
        delta = self.twisted_delta if self.twisted_delta is not None else ("0" if self.vanishing else "nonzero")
        return f"{self.group}[{self.index}] {' '.join(self.images)} -> {delta}"


class QuotientEntry(BaseModel):
    group: str
    index: int
    images: List[str]
    r: int
    l: int

    def to_text(self) -> str:
        return f"{self.group}[{self.index}] {' '.join(self.images)} r={self.r} l={self.l}"


class QuotientsReport(BaseModel):
    knot: str
    counts: Dict[str, int] = Field(default_factory=dict)
    entries: List[QuotientEntry] = Field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"{group}: {count}" for group, count in self.counts.items()]
        lines += [e.to_text() for e in self.entries]
        return "\n".join(lines)


class KnotListReport(BaseModel):
    knots: List[KnotTableEntry] = Field(default_factory=list)

    def to_text(self) -> str:
        return "\n".join(f"{k.name} genus={k.genus} fibered={_yes(k.fibered)}" for k in self.knots)


class PresentationReport(BaseModel):
    knot: str
    zero_surgery: bool
    presentation: str

    def to_text(self) -> str:
        return self.presentation.rstrip("\n")


class CoverData(BaseModel):
    r: int = Field(ge=1)
    l: int = Field(ge=1)
    group_order: int
    b1: Optional[int] = None
    torsion: Optional[List[int]] = None

    @model_validator(mode="after")
    def _product(self):
        if self.r * self.l != self.group_order:
            raise ValueError(f"r*l = {self.r * self.l} differs from |G| = {self.group_order}")
        return self

    def to_text(self) -> str:
        lines = [f"r: {self.r}", f"l: {self.l}", f"group_order: {self.group_order}"]
        if self.b1 is not None:
            lines.append(f"b1: {self.b1}")
        if self.torsion is not None:
            lines.append(f"torsion: {' '.join(str(d) for d in self.torsion) or '-'}")
        return "\n".join(lines)


class CoverModel(BaseModel):
    """Numerics of the rl^3-fold cover built from one epimorphism."""
    r: int = Field(ge=1)
    l: int = Field(ge=1)
    degree: int
    b1_bound: int
    b2plus_bound: int
    r_gt_1: bool
    l_gt_3: bool

    @model_validator(mode="after")
    def _formulas(self):
        if self.degree != self.r * self.l ** 3:
            raise ValueError("degree must be r*l^3")
        if self.b1_bound != (self.r - 1) * (self.l - 1) or self.b2plus_bound != self.b1_bound - 1:
            raise ValueError("bounds must be (r-1)(l-1) and (r-1)(l-1)-1")
        return self

    def to_text(self) -> str:
        return "\n".join([f"cover_model.r: {self.r}", f"cover_model.l: {self.l}",
                          f"cover_model.degree: {self.degree}", f"cover_model.b1_bound: {self.b1_bound}",
                          f"cover_model.b2plus_bound: {self.b2plus_bound}",
                          f"cover_model.r_gt_1: {_yes(self.r_gt_1)}", f"cover_model.l_gt_3: {_yes(self.l_gt_3)}"])


class Certificate(BaseModel):
    group: str
    index: int
    images: List[str]

    def to_text(self) -> str:
        return "\n".join([f"certificate.group: {self.group}", f"certificate.index: {self.index}",
                          f"certificate.images: {' '.join(self.images)}"])


class ObstructionReport(BaseModel):
    knot: str
    delta: str
    monic: bool
    verdict: Verdict
    groups: List[str] = Field(default_factory=list)
    epimorphisms: List[EpimorphismRecord] = Field(default_factory=list)
    certificate: Optional[Certificate] = None
    cover_model: Optional[CoverModel] = None
    budget_consumed: int = 0
    budget_exhausted: bool = False

    @model_validator(mode="after")
    def _consistent(self):
        if self.verdict == "NonFiberedCertificate":
            if self.certificate is None or not any(e.vanishing for e in self.epimorphisms):
                raise ValueError("a certificate needs a vanishing twisted polynomial")
        if self.verdict == "NonMonic" and self.monic:
            raise ValueError("NonMonic verdict with a monic polynomial")
        return self

    def to_text(self) -> str:
        lines = [f"knot: {self.knot}", f"delta: {self.delta}", f"monic: {_yes(self.monic)}",
                 f"verdict: {self.verdict}"]
        if self.budget_exhausted:
            lines.append("budget: exhausted (no obstruction found within budget)")
        lines.append(f"epimorphisms_tried: {len(self.epimorphisms)}")
        if self.certificate is not None:
            lines.append(self.certificate.to_text())
        if self.cover_model is not None:
            lines.append(self.cover_model.to_text())
        return "\n".join(lines)


class CrosscheckReport(BaseModel):
    group: str
    index: int
    lhs: str
    rhs: str
    b1_cover: int
    torsion_cover: List[int] = Field(default_factory=list)
    transfer_degree: int
    strict: bool
    consistent: bool
    factor_power: int = 0
    raw_identity: bool = False

    def to_text(self) -> str:
        lines = [f"lhs: {self.lhs}", f"rhs: {self.rhs}", f"b1_cover: {self.b1_cover}",
                 f"transfer_degree: {self.transfer_degree}", f"consistent: {_yes(self.consistent)}"]
        if self.factor_power:
            lines.append(f"factor_power: {self.factor_power}")
        if self.raw_identity:
            lines.append("raw_identity: yes")
        return "\n".join(lines)


class SeriesReport(BaseModel):
    num: str
    den: List[str] = Field(default_factory=list)
    trunc: int
    coefficients: Dict[str, int] = Field(default_factory=dict)

    def to_text(self) -> str:
        lines = [f"num: {self.num}"]
        if self.den:
            lines.append("den: " + " ".join(f"(1-{m})" for m in self.den))
        lines.append(f"trunc: {self.trunc}")
        lines += [f"{exponent}: {coeff}" for exponent, coeff in self.coefficients.items()]
        return "\n".join(lines)


class BundleReport(BaseModel):
    genus: int
    euler: List[int]
    presentation: str
    b1: int
    torsion: List[int] = Field(default_factory=list)

    def to_text(self) -> str:
        return "\n".join([self.presentation.rstrip("\n"), f"b1: {self.b1}",
                          f"torsion: {' '.join(str(d) for d in self.torsion) or '-'}"])


class CoverIndexReport(BaseModel):
    genus: int
    l: int
    euler: List[int]
    index: int

    def to_text(self) -> str:
        return f"index: {self.index}"


class VerdictReport(BaseModel):
    knot: str
    verdict: Literal["not symplectic", "symplectic", "inconclusive"]
    reason: str
    genus: int
    euler: List[int]
    torus_class_assumed: bool = True
    fibered_asserted: bool = False
    fibered_heuristic: Optional[bool] = None
    bauer_li_ok: Optional[bool] = None
    needs_composite_quotient: Optional[bool] = None
    obstruction: Optional[ObstructionReport] = None

    def to_text(self) -> str:
        lines = [f"knot: {self.knot}", f"verdict: {self.verdict}", f"reason: {self.reason}"]
        if self.fibered_heuristic is not None:
            lines.append(f"fibered_heuristic: {_yes(self.fibered_heuristic)}")
        if self.bauer_li_ok is not None:
            lines.append(f"bauer_li_ok: {_yes(self.bauer_li_ok)}")
        if self.needs_composite_quotient is not None:
            lines.append(f"needs_composite_quotient: {_yes(self.needs_composite_quotient)}")
        if self.obstruction is not None:
            lines.append(self.obstruction.to_text())
        return "\n".join(lines)
