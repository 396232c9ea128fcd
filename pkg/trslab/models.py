from typing import Literal

from pydantic import BaseModel, Field, PositiveInt, field_validator


class FieldDescriptor(BaseModel):
    p: int
    m: int
    modulus: list[int]  # low-to-high coefficients, monic
    generator: int  # integer representation of the canonical primitive element


class DeepHoleVerdict(BaseModel):
    is_deep_hole_syndrome: bool
    witness: list[int] | None = None  # first rejecting subset in colex order
    method: Literal["criterion", "oracle"] = "criterion"
    subsets_checked: int = 0


class CosetRow(BaseModel):
    syndrome: list[int]
    leader_weight: int
    leader: list[int] | None = None
    is_deep_hole: bool


class CharSumRow(BaseModel):
    identity: str
    params: dict
    lhs: str
    rhs: str
    passed: bool = Field(serialization_alias="pass")


# --- Verification run models ---


Status = Literal["pass", "fail", "vacuous", "sampled-consistent"]


class CheckRow(BaseModel):
    check: str
    params: dict
    status: Status
    witnesses: list = Field(default_factory=list)
    counts: dict[str, int] = Field(default_factory=dict)
    detail: str = ""
    runtime_ms: float = 0.0


class ReportSummary(BaseModel):
    total: int = 0
    passed: int = 0
    failed: int = 0
    vacuous: int = 0
    sampled_consistent: int = 0

    @property
    def ok(self) -> bool:
        return self.failed == 0


class RunConfig(BaseModel):
    p: int
    m: PositiveInt = 1
    checks: list[str]
    k: list[int] | None = None  # None = every valid dimension
    l: list[int] | None = None  # None = every valid twist position
    eta: list[str] = Field(default_factory=lambda: ["1"])  # "1", "xi" or a canonical index
    evaluation: list[Literal["nonzero", "full"]] = Field(default_factory=lambda: ["nonzero"])
    mode: Literal["exhaustive", "sampled"] = "exhaustive"
    seed: int = 0
    subset_budget: PositiveInt = 10**7
    coset_budget: PositiveInt = 10**7
    codeword_budget: PositiveInt = 10**7
    sample_count: PositiveInt = 10_000
    output: str | None = None
    csv: str | None = None
    workers: PositiveInt | None = None

    @field_validator("checks", "eta", "evaluation")
    @classmethod
    def _nonempty(cls, v: list) -> list:
        if not v:
            raise ValueError("must not be empty")
        return v


class Report(BaseModel):
    tool_version: str
    config: RunConfig
    rows: list[CheckRow]
    summary: ReportSummary
