"""Request and response models for the compute service.

The models mirror the CLI surface one to one; the CLI builds the same request
objects and renders the same response objects, so the wire format and the
flat-file formats stay in lockstep.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..lattice import HoppingProfile, alpha_profile, custom_profile, two_segment_profile


class Schema(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ProfileModel(Schema):
    kind: Literal["two-segment", "alpha", "custom"] = "two-segment"
    t0: Optional[float] = Field(default=None, gt=0)
    tb: Optional[float] = Field(default=None, gt=0)
    alpha: Optional[float] = None
    amplitudes: Optional[list[float]] = None

    @model_validator(mode="after")
    def _check_fields(self):
        if self.kind == "two-segment" and (self.t0 is None or self.tb is None):
            raise ValueError("two-segment profile requires t0 and tb")
        if self.kind == "alpha" and (self.t0 is None or self.alpha is None):
            raise ValueError("alpha profile requires t0 and alpha")
        if self.kind == "custom" and not self.amplitudes:
            raise ValueError("custom profile requires amplitudes")
        return self

    def to_profile(self) -> HoppingProfile:
        if self.kind == "two-segment":
            return two_segment_profile(self.t0, self.tb)
        if self.kind == "alpha":
            return alpha_profile(self.t0, self.alpha)
        return custom_profile(self.amplitudes)

    def describe(self) -> str:
        if self.kind == "two-segment":
            return f"two-segment:t0={self.t0:.12g},tb={self.tb:.12g}"
        if self.kind == "alpha":
            return f"alpha:t0={self.t0:.12g},alpha={self.alpha:.12g}"
        body = ";".join(f"{a:.12g}" for a in self.amplitudes)
        return f"custom:{body}"


class SpectrumRequest(Schema):
    n_sites: int = Field(ge=2)
    impurity_site: int = Field(ge=1)
    gamma: float = Field(ge=0)
    profile: ProfileModel


class ThresholdRequest(Schema):
    n_sites: int = Field(ge=2)
    impurity_site: int = Field(ge=1)
    profile: ProfileModel
    gamma_max: Optional[float] = Field(default=None, gt=0)


class SweepRequest(Schema):
    n_sites: int = Field(ge=2)
    d_list: list[int]
    tb_grid: list[float]
    t0: float = Field(default=1.0, gt=0)
    audit_points: int = Field(default=64, ge=0)


class FitExponentRequest(Schema):
    n_sites: int = Field(ge=2)
    d_list: list[int]
    window_lo: float = 0.05
    window_hi: float = 0.3
    points: int = Field(default=10, ge=8)
    t0: float = Field(default=1.0, gt=0)


class VerifyRequest(Schema):
    suite: Literal["oracle", "symmetry", "maximal", "secular", "eq5", "all"]
    seed: int


class SpectrumRow(Schema):
    index: int
    re: float
    im: float
    classification: str
    residual: float


class SpectrumResponse(Schema):
    rows: list[SpectrumRow]
    n_complex: int
    e_scale: float


class SweepRecordModel(Schema):
    n_sites: int
    impurity_site: int
    d: int
    t0: float
    tb: float
    tb_over_t0: float
    gamma_c: float
    gamma_c_over_t0: float
    n_complex_above: int
    bracket_width: float


class ThresholdResponse(Schema):
    record: SweepRecordModel
    n_complex_below: int
    iterations: int


class SweepFailureModel(Schema):
    d: int
    tb: float
    reason: str


class SweepResponse(Schema):
    records: list[SweepRecordModel]
    failures: list[SweepFailureModel]


class ExponentFitModel(Schema):
    d: int
    eta: float
    stderr: float
    window_lo: float
    window_hi: float
    n_points: int
    points: list[tuple[float, float]]


class FitExponentResponse(Schema):
    fits: list[ExponentFitModel]


class CheckModel(Schema):
    name: str
    passed: bool
    measured: str


class VerifyResponse(Schema):
    suite: str
    seed: int
    checks: list[CheckModel]
    passed: bool


class HealthResponse(Schema):
    status: str
    version: str
