# ---------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------
from __future__ import annotations

from typing import Literal

# ---------------------------------------------------------------------
# Third-party libraries
# ---------------------------------------------------------------------
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# ---------------------------------------------------------------------
# Internal application imports
# ---------------------------------------------------------------------
from superpoint.rrh import RRHParams, validate_params


class SketchSettings(BaseSettings):
    """
    Sketch geometry and detection parameters.

    Env prefix: SUPERPOINT_

    Examples:
        SUPERPOINT_K=300
        SUPERPOINT_G=4096
        SUPERPOINT_THETA=1024
    """

    model_config = SettingsConfigDict(
        env_prefix="SUPERPOINT_",
        extra="ignore",
    )

    k: int = Field(default=300, ge=1)
    k_prime: int = Field(default=300, ge=1)
    g: int = Field(default=1024, ge=2)
    c: int = Field(default=10, ge=1)
    r: int = Field(default=4, ge=1)
    u: int = Field(default=2, ge=0, le=31)
    s: int = Field(default=7, ge=1)
    theta: float = Field(default=1024.0, gt=0)
    seed: int = 1
    cap: int = Field(default=1_000_000, ge=1)

    mangle_mode: Literal["odd", "prime"] = "odd"
    prime: int | None = None
    multiplier: int | None = None


    def rrh_params(self) -> RRHParams:
        """
        Hashing parameters derived from the master seed.

        Returns:
            RRHParams
        """
        return RRHParams.from_seed(
            c=self.c,
            r=self.r,
            s=self.s,
            u=self.u,
            seed=self.seed,
            mode=self.mangle_mode,
            prime=self.prime,
            multiplier=self.multiplier,
        )


    def violations(self) -> list[str]:
        """
        Every reason these settings cannot build a cube.

        Returns:
            list[str]
        """
        out = list(validate_params(self.rrh_params()))

        if self.g < 2 * self.k:
            out.append(f"g must be >= 2k ({2 * self.k}), got {self.g}")
        if not 1 <= self.k_prime <= self.k:
            out.append(f"k_prime must be in [1, {self.k}], got {self.k_prime}")

        return out


def load_settings(**kwargs) -> SketchSettings:
    """
    Load sketch settings.

    Returns:
        SketchSettings
    """
    return SketchSettings(**kwargs)
