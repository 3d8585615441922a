from typing import Any, List

from pydantic import Field, computed_field, model_validator

from convforge.utils.pydantic_types import FrozenModel


class NetworkConfig(FrozenModel):
    d: int = Field(..., ge=1)
    s: int = Field(..., ge=2)
    J: int = Field(..., ge=1)

    @model_validator(mode="before")
    @classmethod
    def drop_derived_widths(cls, values: Any) -> Any:
        # widths are serialised for readers of the JSON file but always recomputed here
        if isinstance(values, dict) and "widths" in values:
            values = dict(values)
            widths = values.pop("widths")
            d, s, J = values.get("d"), values.get("s"), values.get("J")

            if isinstance(d, int) and isinstance(s, int) and isinstance(J, int) and list(widths) != [
                d + j * s for j in range(J + 1)
            ]:
                raise ValueError(f"widths {widths} do not follow d_j = d + j*s")

        return values

    @computed_field  # type: ignore[prop-decorator]
    @property
    def widths(self) -> List[int]:
        """
        d_j = d + j*s for j = 0..J
        """
        return [self.d + j * self.s for j in range(self.J + 1)]

    @property
    def output_width(self) -> int:
        return self.d + self.J * self.s


def minimal_depth(d: int, s: int, m: int) -> int:
    """
    Smallest J with J(s-1) >= (m+1)d, so that the factorization fits and the last row of T^W vanishes
    """
    return -(-((m + 1) * d) // (s - 1))
