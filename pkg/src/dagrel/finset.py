"""Finite sets of string labels, shared by the set-based instances."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator


@dataclass(frozen=True)
class FinSet:
    """A finite set with canonically sorted, distinct string labels."""

    elements: tuple[str, ...]

    def __post_init__(self):
        elems = tuple(self.elements)
        if any(not isinstance(x, str) for x in elems):
            raise TypeError("FinSet labels must be strings")
        if len(set(elems)) != len(elems):
            raise ValueError(f"duplicate labels in {elems!r}")
        object.__setattr__(self, "elements", tuple(sorted(elems)))

    @classmethod
    def of(cls, *labels: str) -> "FinSet":
        return cls(tuple(labels))

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __repr__(self):
        return "{" + ", ".join(self.elements) + "}"

    def to_json(self) -> list[str]:
        return list(self.elements)


def finset_range(n: int) -> FinSet:
    """The set [n] = {1, ..., n}; [0] is empty."""
    return FinSet(tuple(str(i) for i in range(1, n + 1)))


def pair_label(a: str, b: str) -> str:
    return f"({a}|{b})"


def all_functions(dom: Iterable[str], cod: Iterable[str]) -> Iterator[dict[str, str]]:
    dom, cod = list(dom), list(cod)
    for values in product(cod, repeat=len(dom)):
        yield dict(zip(dom, values))


def set_partitions(items: list[str]) -> Iterator[list[list[str]]]:
    """All set partitions of ``items``, blocks in order of first element."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


class UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if rx < ry:
                self.parent[ry] = rx
            else:
                self.parent[rx] = ry

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out
