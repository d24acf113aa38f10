"""Small backtracking solver shared by the enumerators."""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

Check = Callable[[Mapping], bool]


class Problem:
    """Variables assigned in a fixed order, checks fired as soon as their inputs are known.

    ``domain(var, partial)`` lists the candidates for ``var`` given the values chosen
    so far; candidate order is preserved, so solutions come out in lexicographic
    order of the domains.
    """

    def __init__(self, order: Sequence[Hashable], domain: Callable[[Hashable, dict], Iterable]):
        self.order = list(order)
        self.position = {v: i for i, v in enumerate(self.order)}
        self.domain = domain
        self.checks: dict[Hashable, list[Check]] = {}
        self.initial: list[Check] = []

    def require(self, variables: Iterable[Hashable], check: Check) -> None:
        positions = [self.position[v] for v in variables if v in self.position]
        if not positions:
            self.initial.append(check)
            return
        last = self.order[max(positions)]
        self.checks.setdefault(last, []).append(check)

    def solutions(self) -> Iterator[dict]:
        partial: dict = {}
        if not all(check(partial) for check in self.initial):
            return
        yield from self._extend(0, partial)

    def _extend(self, i: int, partial: dict) -> Iterator[dict]:
        if i == len(self.order):
            yield dict(partial)
            return
        var = self.order[i]
        checks = self.checks.get(var, ())
        for value in self.domain(var, partial):
            partial[var] = value
            if all(check(partial) for check in checks):
                yield from self._extend(i + 1, partial)
        partial.pop(var, None)
