"""Cheap pruning between candidate generation and verification.

Both filters reject only pairs whose normalized setwise distance provably
exceeds the threshold, so the verified output is identical with filters on or
off. The length filter reads two integers; the histogram filter lower-bounds
the setwise cost from sorted token-length lists. Both predicates are exact
integer comparisons against the rational threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

from .candidates import CandidatePair
from .setdist import TokenLengthHistogram, sorted_lengths_lower_bound
from .strdist import threshold_ratio


@dataclass(slots=True)
class FilterStats:
    """Counters reconciling exactly: input = pruned_by_length + pruned_by_histogram + surviving."""

    input_pairs: int = 0
    pruned_by_length: int = 0
    pruned_by_histogram: int = 0
    surviving: int = 0

    def merge(self, other: "FilterStats") -> None:
        self.input_pairs += other.input_pairs
        self.pruned_by_length += other.pruned_by_length
        self.pruned_by_histogram += other.pruned_by_histogram
        self.surviving += other.surviving

    def to_dict(self) -> dict[str, int]:
        return {
            "input_pairs": self.input_pairs,
            "pruned_by_length": self.pruned_by_length,
            "pruned_by_histogram": self.pruned_by_histogram,
            "surviving": self.surviving,
        }


def length_prunes(la: int, lb: int, num: int, den: int) -> bool:
    """True when aggregate lengths alone put the pair beyond num/den.

    1 - min/max > T, cross-multiplied; two zero lengths never prune.
    """
    if la > lb:
        la, lb = lb, la
    # 1 - la/lb > T  <=>  (lb - la) * den > num * lb
    return (lb - la) * den > num * lb


def length_filter(pair: CandidatePair, threshold: float) -> bool:
    """Keep/prune decision from aggregate lengths only. True means keep."""
    num, den = threshold_ratio(threshold)
    return not length_prunes(pair.left_len, pair.right_len, num, den)


def histogram_prunes(
    lens_a: tuple[int, ...],
    lens_b: tuple[int, ...],
    la: int,
    lb: int,
    num: int,
    den: int,
) -> bool:
    """True when the sorted-length lower bound already exceeds num/den."""
    lower = sorted_lengths_lower_bound(lens_a, lens_b)
    # 2*LB/(la + lb + LB) > T, cross-multiplied
    return 2 * lower * den > num * (la + lb + lower)


def histogram_filter(
    hists: tuple[TokenLengthHistogram, TokenLengthHistogram],
    lens: tuple[int, int],
    threshold: float,
) -> bool:
    """Keep/prune decision from token-length histograms. True means keep.

    Never prunes a pair whose true normalized setwise distance is within the
    threshold: the bound is a lower bound on the setwise cost and the
    normalization is increasing in it.
    """
    num, den = threshold_ratio(threshold)
    ha, hb = hists
    la, lb = lens
    return not histogram_prunes(ha.sorted_lengths(), hb.sorted_lengths(), la, lb, num, den)
