"""Two-block SBM mathematics: sufficient statistics and log densities.

All likelihood arithmetic is done in log space; impossible configurations
(an edge in a block with probability 0) evaluate to -inf rather than raising.
Degenerate blocks (n1 = 0 or n2 = 0) are legal and contribute zero terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import betaln

from .graph import Graph


class BlockProbs(NamedTuple):
    p11: float
    p12: float
    p22: float


@dataclass(frozen=True)
class BlockCounts:
    """Sufficient statistics of the two-block SBM likelihood.

    Mij is the realized and mij the possible number of edges between blocks
    i and j; n1, n2 are the block sizes.
    """

    M11: int
    M12: int
    M22: int
    m11: int
    m12: int
    m22: int
    n1: int
    n2: int

    def swapped(self) -> "BlockCounts":
        """Counts after exchanging the two group names."""
        return BlockCounts(
            M11=self.M22, M12=self.M12, M22=self.M11,
            m11=self.m22, m12=self.m12, m22=self.m11,
            n1=self.n2, n2=self.n1,
        )


@dataclass(frozen=True, eq=False)
class Hyperparameters:
    """Beta shapes per block pair and per-node prior probabilities of group 1."""

    a0_11: float
    b0_11: float
    a0_12: float
    b0_12: float
    a0_22: float
    b0_22: float
    pi: np.ndarray

    def __post_init__(self):
        shapes = (self.a0_11, self.b0_11, self.a0_12,
                  self.b0_12, self.a0_22, self.b0_22)
        if any(s <= 0 for s in shapes):
            raise ValueError("Beta shape parameters must be strictly positive")
        pi = np.asarray(self.pi, dtype=float)
        if np.any(pi <= 0) or np.any(pi >= 1):
            raise ValueError("label prior probabilities must lie strictly in (0, 1)")
        object.__setattr__(self, "pi", pi)

    @classmethod
    def uniform(cls, n: int, a0: float = 1.0, b0: float = 1.0, pi: float = 0.5):
        """Same Beta(a0, b0) on every block pair and flat pi for all n nodes."""
        return cls(a0_11=a0, b0_11=b0, a0_12=a0, b0_12=b0, a0_22=a0, b0_22=b0,
                   pi=np.full(n, pi))

    def block_symmetric(self) -> bool:
        """Whether exchanging group names leaves the prior unchanged."""
        return (self.a0_11, self.b0_11) == (self.a0_22, self.b0_22)


def block_counts(g: Graph, c: np.ndarray) -> BlockCounts:
    """Sufficient statistics for labels c (entries in {1, 2}) on graph g."""
    c = np.asarray(c)
    if len(c) != g.n:
        raise ValueError(f"label vector length {len(c)} != graph n={g.n}")
    n1 = int(np.count_nonzero(c == 1))
    n2 = g.n - n1
    M11 = M12 = M22 = 0
    for i in range(g.n):
        ci = c[i]
        for j in g.adjacency[i]:
            if j > i:
                if ci == 1:
                    if c[j] == 1:
                        M11 += 1
                    else:
                        M12 += 1
                elif c[j] == 1:
                    M12 += 1
                else:
                    M22 += 1
    return BlockCounts(
        M11=M11, M12=M12, M22=M22,
        m11=n1 * (n1 - 1) // 2, m12=n1 * n2, m22=n2 * (n2 - 1) // 2,
        n1=n1, n2=n2,
    )


def _bernoulli_block_term(M: int, m: int, p: float) -> float:
    """M log p + (m - M) log(1 - p), with 0 * log 0 == 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"block probability {p} outside [0, 1]")
    out = 0.0
    if M > 0:
        out += M * math.log(p) if p > 0.0 else -math.inf
    if m - M > 0:
        out += (m - M) * math.log1p(-p) if p < 1.0 else -math.inf
    return out


def log_likelihood(counts: BlockCounts, p: BlockProbs) -> float:
    """Log of the collapsed Bernoulli likelihood over the three block pairs."""
    return (
        _bernoulli_block_term(counts.M11, counts.m11, p.p11)
        + _bernoulli_block_term(counts.M12, counts.m12, p.p12)
        + _bernoulli_block_term(counts.M22, counts.m22, p.p22)
    )


def flip_counts(g: Graph, c: np.ndarray, counts: BlockCounts, i: int) -> BlockCounts:
    """Counts after flipping node i's label, touching only i's incident pairs."""
    if not 0 <= i < g.n:
        raise ValueError(f"node id {i} out of range for graph with n={g.n}")
    d1 = 0
    for j in g.adjacency[i]:
        if c[j] == 1:
            d1 += 1
    d2 = len(g.adjacency[i]) - d1
    if c[i] == 1:
        n1, n2 = counts.n1 - 1, counts.n2 + 1
        M11, M12, M22 = counts.M11 - d1, counts.M12 + d1 - d2, counts.M22 + d2
    else:
        n1, n2 = counts.n1 + 1, counts.n2 - 1
        M11, M12, M22 = counts.M11 + d1, counts.M12 + d2 - d1, counts.M22 - d2
    return BlockCounts(
        M11=M11, M12=M12, M22=M22,
        m11=n1 * (n1 - 1) // 2, m12=n1 * n2, m22=n2 * (n2 - 1) // 2,
        n1=n1, n2=n2,
    )


def log_likelihood_delta(
    g: Graph, c: np.ndarray, counts: BlockCounts, p: BlockProbs, i: int
) -> tuple[float, BlockCounts]:
    """Change in log likelihood from flipping node i, plus the updated counts.

    Only node i's incident pairs enter the difference: O(n) per call, never a
    full O(n^2) recompute. ``counts`` must equal block_counts(g, c).
    """
    new_counts = flip_counts(g, c, counts, i)
    # contributions of pairs not involving i cancel in the difference
    old = (
        _bernoulli_block_term(counts.M11, counts.m11, p.p11)
        + _bernoulli_block_term(counts.M12, counts.m12, p.p12)
        + _bernoulli_block_term(counts.M22, counts.m22, p.p22)
    )
    new = (
        _bernoulli_block_term(new_counts.M11, new_counts.m11, p.p11)
        + _bernoulli_block_term(new_counts.M12, new_counts.m12, p.p12)
        + _bernoulli_block_term(new_counts.M22, new_counts.m22, p.p22)
    )
    return new - old, new_counts


def log_prior_labels(c: np.ndarray, h: Hyperparameters) -> float:
    """Sum of log pi_i for group-1 nodes and log(1 - pi_i) otherwise."""
    c = np.asarray(c)
    if len(c) != len(h.pi):
        raise ValueError(f"label vector length {len(c)} != pi length {len(h.pi)}")
    in1 = c == 1
    return float(np.sum(np.log(h.pi[in1])) + np.sum(np.log1p(-h.pi[~in1])))


def log_marginal_likelihood(counts: BlockCounts, h: Hyperparameters) -> float:
    """Log likelihood with the block probabilities integrated out analytically.

    Each block pair contributes log B(Mij + a0, mij - Mij + b0) - log B(a0, b0);
    empty blocks contribute exactly zero.
    """
    return float(
        betaln(counts.M11 + h.a0_11, counts.m11 - counts.M11 + h.b0_11)
        - betaln(h.a0_11, h.b0_11)
        + betaln(counts.M12 + h.a0_12, counts.m12 - counts.M12 + h.b0_12)
        - betaln(h.a0_12, h.b0_12)
        + betaln(counts.M22 + h.a0_22, counts.m22 - counts.M22 + h.b0_22)
        - betaln(h.a0_22, h.b0_22)
    )
