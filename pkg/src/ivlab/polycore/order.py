"""Monomial orders."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence


@dataclass(frozen=True)
class TermOrder:
    """A monomial order: ``lex`` or ``grevlex`` over a variable priority.

    ``priority`` lists variable names from most to least significant.  Names
    of a polynomial's ring that are missing from it follow in ring order.
    Keys returned by :meth:`keyfunc` compare larger for larger monomials.
    """

    kind: str = "grevlex"
    priority: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex"):
            raise ValueError(f"unknown term order {self.kind!r}")
        object.__setattr__(self, "priority", tuple(self.priority))

    def permutation(self, variables: Sequence[str]) -> tuple[int, ...]:
        index = {v: i for i, v in enumerate(variables)}
        perm = [index[v] for v in self.priority if v in index]
        seen = set(perm)
        perm.extend(i for i in range(len(variables)) if i not in seen)
        return tuple(perm)

    def keyfunc(self, variables: Sequence[str]) -> Callable[[tuple], tuple]:
        perm = self.permutation(variables)
        natural = perm == tuple(range(len(variables)))
        if self.kind == "lex":
            if natural:
                return lambda e: e
            return lambda e: tuple(e[i] for i in perm)
        rev = perm[::-1]
        return lambda e: (sum(e), tuple(-e[i] for i in rev))

    def is_natural(self, variables: Sequence[str]) -> bool:
        return self.permutation(variables) == tuple(range(len(variables)))


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")
DEFAULT_ORDER = GREVLEX
