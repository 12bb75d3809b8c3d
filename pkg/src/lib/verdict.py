from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Tuple


@dataclass(frozen=True)
class Violation:
    """One failed condition: which rule, at which vertex, and the offending neighbour."""
    condition: str
    vertex: Optional[int] = None
    neighbor: Optional[int] = None
    detail: str = ""

    def describe(self, label: Callable[[int], str] = str) -> str:
        text = self.condition + " violated"
        if self.vertex is not None:
            text += f" at {label(self.vertex)}"
        if self.neighbor is not None:
            text += f" (neighbor {label(self.neighbor)})"
        if self.detail:
            text += f": {self.detail}"
        return text


@dataclass(frozen=True)
class Verdict:
    violations: Tuple[Violation, ...] = field(default_factory=tuple)

    @classmethod
    def of(cls, violations: Iterable[Violation]) -> "Verdict":
        return cls(tuple(violations))

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def conditions(self) -> set:
        return {v.condition for v in self.violations}

    def lines(self, label: Callable[[int], str] = str) -> list:
        if self.ok:
            return ["ok"]
        return [v.describe(label) for v in self.violations]
