"""Search results shared by both backends and the harness."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .exactpoly import BivariatePoly, canonical_form, swap_vars

__all__ = ["FamilyWitness", "SearchReport", "fingerprint", "canonical_set", "swap_closure"]


def fingerprint(flags: Dict[str, Any]) -> str:
    """Deterministic short hash of the enabled constraints and flags."""
    blob = json.dumps(flags, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def canonical_set(polys: Sequence[BivariatePoly]) -> List[BivariatePoly]:
    """Swap-identified, sorted, duplicate-free list."""
    seen = {canonical_form(p) for p in polys}
    return sorted(seen, key=BivariatePoly.sort_key)


def swap_closure(polys: Sequence[BivariatePoly]) -> List[BivariatePoly]:
    out = set(polys) | {swap_vars(p) for p in polys}
    return sorted(out, key=BivariatePoly.sort_key)


@dataclass(frozen=True)
class FamilyWitness:
    """Two distinct members of H(2,d) sharing one support (a positive-dimensional family)."""

    support: Tuple[Tuple[int, int], ...]
    nullspace_dim: int
    members: Tuple[BivariatePoly, BivariatePoly]


@dataclass
class SearchReport:
    degree: int
    n_terms: int
    backend: str
    flags: Dict[str, Any]
    raw: List[BivariatePoly]
    families: List[FamilyWitness] = field(default_factory=list)
    stats: Dict[str, int] = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)
    shards: List[Dict[str, Any]] = field(default_factory=list)
    manifest: Optional[Dict[str, Any]] = None

    def __post_init__(self) -> None:
        self.raw = sorted(set(self.raw), key=BivariatePoly.sort_key)
        self.families = sorted(self.families, key=lambda f: f.support)

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.flags)

    @property
    def polynomials(self) -> List[BivariatePoly]:
        return canonical_set(self.raw)

    @property
    def raw_count(self) -> int:
        return len(self.raw)
