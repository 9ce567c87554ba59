"""
Parameters that rebuild a particle method algorithm from an instance.
"""

from typing import Any, Dict, Tuple

from pydantic import BaseModel, Field, model_validator


class MethodParams(BaseModel):
    """Method name plus everything its algorithm depends on."""

    name: str = Field(description="Registered method name")
    cutoff: float = Field(gt=0, description="Cutoff radius r_c")
    domain_min: Tuple[float, ...] = Field(description="Lower domain bound D_min")
    domain_max: Tuple[float, ...] = Field(description="Upper domain bound D_max")
    t_max: int = Field(default=1, ge=1, description="Stop bound for the step counter")
    params: Dict[str, Any] = Field(
        default_factory=dict, description="Method-specific scalars"
    )

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_domain(self) -> "MethodParams":
        if not self.domain_min or len(self.domain_min) != len(self.domain_max):
            raise ValueError("domain_min and domain_max must have the same non-zero length")
        if any(lo >= hi for lo, hi in zip(self.domain_min, self.domain_max)):
            raise ValueError("domain_min must be below domain_max in every dimension")
        return self

    @property
    def d(self) -> int:
        return len(self.domain_min)
