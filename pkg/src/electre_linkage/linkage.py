"""Comparison space construction and pair classification.

Builds the full cross product A x B, turns each pair into a vector of
per-field similarities and maps Electre Tri categories onto the
match / potential match / nonmatch decision.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import Category, ElectreModel, ModelError, classify_batch
from .ingest import LinkageSchema, RecordTable

__all__ = [
    "ComparisonVector",
    "build_pairs",
    "pair_matrix",
    "label_pairs",
    "classify_pairs",
    "write_classified",
]

LABEL_POLICIES = ("two_class", "banded")


@dataclass(frozen=True)
class ComparisonVector:
    pair: tuple[str, str]
    performances: tuple[float, ...]
    label: Category | None = None


def build_pairs(a: RecordTable, b: RecordTable, schema: LinkageSchema):
    """Yield one ComparisonVector per cross pair, row-major by table order.

    Similarities are cached per field on the distinct value pairs, which
    collapses the heavy string-metric work on census-style data.
    """
    caches = [dict() for _ in schema.compared_fields]
    for id_a, rec_a in a.records:
        for id_b, rec_b in b.records:
            perf = []
            for (fname, comparator), cache in zip(schema.compared_fields, caches):
                key = (rec_a[fname], rec_b[fname])
                s = cache.get(key)
                if s is None:
                    s = comparator.compare(*key)
                    cache[key] = s
                perf.append(s)
            yield ComparisonVector((id_a, id_b), tuple(perf))


def pair_matrix(pairs):
    """Materialize a pair stream as (ids, performance matrix, labels)."""
    ids, rows, labels = [], [], []
    for cv in pairs:
        ids.append(cv.pair)
        rows.append(cv.performances)
        labels.append(0 if cv.label is None else cv.label.index)
    return ids, np.asarray(rows, dtype=float), np.asarray(labels, dtype=int)


def label_pairs(pairs, links, policy: str = "two_class", fs_model=None):
    """Attach ground-truth categories to a pair stream.

    two_class: linked pairs are C3, everything else C1. banded: nonlink
    pairs whose Fellegi-Sunter log ratio falls inside [Lower, Upper] get C2.
    """
    if policy not in LABEL_POLICIES:
        raise ValueError(f"unknown label policy {policy!r}")
    if policy == "banded" and fs_model is None:
        raise ValueError("banded labeling needs a fitted Fellegi-Sunter model")
    for cv in pairs:
        if cv.pair in links:
            cat = Category(3)
        elif policy == "banded":
            score = fs_model.log_ratio(cv)
            in_band = fs_model.lower <= score <= fs_model.upper
            cat = Category(2) if in_band else Category(1)
        else:
            cat = Category(1)
        yield ComparisonVector(cv.pair, cv.performances, cat)


def classify_pairs(pairs, model: ElectreModel, procedure: str = "pessimistic"):
    """Assign every pair; returns (ids, categories, sigma matrix, truth)."""
    ids, X, truth = pair_matrix(pairs)
    if len(ids) == 0:
        return ids, np.empty(0, dtype=int), np.empty((0, model.profiles.count)), truth
    if X.shape[1] != model.m:
        raise ModelError(
            f"pairs have {X.shape[1]} criteria, model has {model.m}"
        )
    cats, sigma = classify_batch(model, X, procedure)
    return ids, cats, sigma, truth


def write_classified(path, ids, X, cats, sigma, truth, field_names) -> None:
    """Classified-pairs file: ids, performances, per-profile sigma, categories."""
    nprof = sigma.shape[1] if len(cats) else 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = (
            ["id_a", "id_b"]
            + [f"sim_{f}" for f in field_names]
            + [f"sigma_b{h}" for h in range(1, nprof + 1)]
            + ["assigned", "truth"]
        )
        writer.writerow(header)
        for i, (id_a, id_b) in enumerate(ids):
            row = [id_a, id_b]
            row += [repr(float(v)) for v in X[i]]
            row += [repr(float(v)) for v in sigma[i]]
            row.append(f"C{cats[i]}")
            row.append(f"C{truth[i]}" if truth[i] else "")
            writer.writerow(row)
