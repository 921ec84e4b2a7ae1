"""Likelihood-ratio baseline classifier.

Per-field agreement probabilities among links (m) and nonlinks (u) are
estimated by Laplace-smoothed counting from labeled pairs; the log2 ratio
is thresholded by Lower/Upper into the three-way decision.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .core import Category

__all__ = ["FsModel", "FsError", "fit_fs", "fs_decide"]

DEFAULT_AGREEMENT_THRESHOLD = 0.88
DEFAULT_BAND_RATE = 0.01


class FsError(ValueError):
    pass


@dataclass(frozen=True)
class FsModel:
    m_probs: tuple[float, ...]
    u_probs: tuple[float, ...]
    agreement_thresholds: tuple[float, ...]
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise FsError(f"need Lower <= Upper, got {self.lower} > {self.upper}")
        for prob in (*self.m_probs, *self.u_probs):
            if not 0 < prob < 1:
                raise FsError(f"probability {prob} outside (0, 1)")

    @property
    def field_count(self) -> int:
        return len(self.m_probs)

    def agreements(self, cv) -> list[bool]:
        return [
            s >= t for s, t in zip(cv.performances, self.agreement_thresholds)
        ]

    def log_ratio(self, cv) -> float:
        """log2 R under conditional independence of the field agreements."""
        total = 0.0
        for agree, m, u in zip(self.agreements(cv), self.m_probs, self.u_probs):
            if agree:
                total += math.log2(m / u)
            else:
                total += math.log2((1 - m) / (1 - u))
        return total

    def to_json(self) -> str:
        return json.dumps(
            {
                "m_probs": list(self.m_probs),
                "u_probs": list(self.u_probs),
                "agreement_thresholds": list(self.agreement_thresholds),
                "lower": self.lower,
                "upper": self.upper,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "FsModel":
        d = json.loads(text)
        return cls(
            tuple(d["m_probs"]),
            tuple(d["u_probs"]),
            tuple(d["agreement_thresholds"]),
            d["lower"],
            d["upper"],
        )


def fit_fs(labeled_pairs, agreement_threshold=DEFAULT_AGREEMENT_THRESHOLD,
           band_rate: float = DEFAULT_BAND_RATE) -> FsModel:
    """Supervised fit from a stream of labeled ComparisonVectors.

    Pairs labeled C3 count as links, everything else as nonlinks. Lower and
    Upper default to the log2-ratio quantiles that keep about band_rate of
    the training pairs inside the potential-match band.
    """
    pairs = list(labeled_pairs)
    if not pairs:
        raise FsError("no labeled pairs to fit on")
    nfields = len(pairs[0].performances)
    if isinstance(agreement_threshold, (int, float)):
        thresholds = (float(agreement_threshold),) * nfields
    else:
        thresholds = tuple(agreement_threshold)

    link_agree = [0] * nfields
    nonlink_agree = [0] * nfields
    n_link = n_nonlink = 0
    for cv in pairs:
        if cv.label is None:
            raise FsError(f"pair {cv.pair} has no label")
        is_link = cv.label.index == 3
        if is_link:
            n_link += 1
        else:
            n_nonlink += 1
        for j, (s, t) in enumerate(zip(cv.performances, thresholds)):
            if s >= t:
                if is_link:
                    link_agree[j] += 1
                else:
                    nonlink_agree[j] += 1
    if n_link == 0:
        raise FsError("training pairs contain no links (C3)")
    if n_nonlink == 0:
        raise FsError("training pairs contain no nonlinks")

    # Laplace smoothing with pseudo-count 1
    m_probs = tuple((link_agree[j] + 1) / (n_link + 2) for j in range(nfields))
    u_probs = tuple((nonlink_agree[j] + 1) / (n_nonlink + 2) for j in range(nfields))

    probe = FsModel(m_probs, u_probs, thresholds, lower=0.0, upper=0.0)
    scored = sorted(
        (probe.log_ratio(cv), cv.label.index == 3) for cv in pairs
    )
    cut = _best_cut(scored)
    lower, upper = _band_around(scored, cut, band_rate)
    return FsModel(m_probs, u_probs, thresholds, lower, upper)


def _best_cut(scored) -> float:
    """Score threshold minimizing training errors for 'link iff score > cut'."""
    n_link = sum(1 for _, is_link in scored if is_link)
    # candidate cuts: below everything, then between consecutive scores
    best_cut = scored[0][0] - 1.0
    best_err = sum(1 for _, is_link in scored if not is_link)  # all called links
    links_below = nonlinks_below = 0
    for i, (score, is_link) in enumerate(scored):
        if is_link:
            links_below += 1
        else:
            nonlinks_below += 1
        err = links_below + (len(scored) - n_link - nonlinks_below)
        if err < best_err:
            best_err = err
            nxt = scored[i + 1][0] if i + 1 < len(scored) else score + 1.0
            best_cut = (score + nxt) / 2.0
    return best_cut


def _band_around(scored, cut: float, band_rate: float):
    """[Lower, Upper] spanning the ~band_rate of scores nearest the cut."""
    scores = [s for s, _ in scored]
    k = int(band_rate * len(scores) / 2)
    below = [s for s in scores if s <= cut]
    above = [s for s in scores if s > cut]
    lower = below[-k] if k and len(below) >= k else cut
    upper = above[k - 1] if k and len(above) >= k else cut
    return lower, upper


def fs_decide(model: FsModel, cv) -> Category:
    """Three-way decision; scores exactly at a threshold fall in the band."""
    score = model.log_ratio(cv)
    if score > model.upper:
        return Category(3)
    if score < model.lower:
        return Category(1)
    return Category(2)
