from typing import Any, Dict

from app.models.errors import ParameterError


class MaskPair:
    """
    Linear masks for a correlation T.F(x) = lambda.x.

    Attributes:
        T: Output mask
        lam: Input mask
        width: Bit width of both masks
    """

    def __init__(self, T: int, lam: int, width: int):
        self.T = T
        self.lam = lam
        self.width = width

        self._validate()

    def _validate(self) -> None:
        if self.width < 1:
            raise ParameterError("Mask width must be positive")
        limit = 1 << self.width
        if not 0 <= self.T < limit or not 0 <= self.lam < limit:
            raise ParameterError(f"Masks must fit in {self.width} bits")

    def to_dict(self) -> Dict[str, Any]:
        return {"T": f"0x{self.T:X}", "lambda": f"0x{self.lam:X}", "width": self.width}

    def __repr__(self) -> str:
        return f"MaskPair(T=0x{self.T:X}, lambda=0x{self.lam:X}, width={self.width})"
