"""
Train/validation/test splitting and labelled-subset selection.
"""
import logging
import math
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from src.constants import (
    MIN_DOCUMENTS_FOR_SPLIT,
    MIN_DOCUMENTS_PER_CLASS,
    SPLIT_RATIOS,
    Split,
)
from src.models.corpus import ProcessedCorpus, SplitAssignment
from src.numerics.random_source import RandomSource

logger = logging.getLogger(__name__)


def round_half_up(value: float) -> int:
    """Round to the nearest integer, halves away from zero (for non-negative values)."""
    return int(math.floor(value + 0.5))


def _class_counts(n: int, ratios: tuple[int, int, int]) -> tuple[int, int, int]:
    """(train, validation, test) sizes for a class of n documents."""
    total = sum(ratios)
    n_validation = max(1, round_half_up(n * ratios[1] / total))
    n_test = max(1, round_half_up(n * ratios[2] / total))
    return n - n_validation - n_test, n_validation, n_test


def split_labels(
    labels: Sequence[int],
    seed: int,
    ratios: tuple[int, int, int] = SPLIT_RATIOS,
) -> SplitAssignment:
    """
    Stratified train/validation/test assignment.

    Each class is shuffled with the "split" substream of `seed` and cut into
    contiguous train, validation and test runs. Validation and test get
    round_half_up(n * ratio) documents of an n-document class, at least one
    each, and train keeps the rest.

    Args:
        labels: Class index per document
        seed: Shuffle seed
        ratios: (train, validation, test) weights

    Returns:
        SplitAssignment with an all-false labelled mask

    Raises:
        ValueError: If there are fewer than 10 documents, a class has fewer
            than 3 documents, or a class leaves no train document
    """
    labels = np.asarray(labels, dtype=np.int64)
    n_docs = len(labels)
    if n_docs < MIN_DOCUMENTS_FOR_SPLIT:
        raise ValueError(f"Need at least {MIN_DOCUMENTS_FOR_SPLIT} documents to split, got {n_docs}")
    if len(ratios) != 3 or min(ratios) <= 0:
        raise ValueError(f"Ratios must be three positive weights, got {ratios}")

    classes, counts = np.unique(labels, return_counts=True)
    small = [int(c) for c, n in zip(classes, counts) if n < MIN_DOCUMENTS_PER_CLASS]
    if small:
        raise ValueError(f"Classes {small} have fewer than {MIN_DOCUMENTS_PER_CLASS} documents")

    rng = RandomSource(seed).substream("split")
    splits = [Split.TRAIN] * n_docs
    for class_id in classes:
        members = rng.permutation(np.flatnonzero(labels == class_id))
        n_train, n_validation, _ = _class_counts(len(members), ratios)
        if n_train < 1:
            raise ValueError(f"Class {int(class_id)} cannot be spread over a {ratios} split")
        for i in members[n_train:n_train + n_validation]:
            splits[int(i)] = Split.VALIDATION
        for i in members[n_train + n_validation:]:
            splits[int(i)] = Split.TEST

    assignment = SplitAssignment(splits=splits, labelled_mask=[False] * n_docs)
    logger.info(f"📊 Split {n_docs} documents: {assignment.sizes()}")
    return assignment


def split_corpus(
    corpus: ProcessedCorpus,
    seed: int,
    ratios: tuple[int, int, int] = SPLIT_RATIOS,
) -> SplitAssignment:
    """Stratified split of a processed corpus (see split_labels)."""
    return split_labels(corpus.labels, seed=seed, ratios=ratios)


def select_labelled_subset(split: SplitAssignment, proportion: float, seed: int) -> np.ndarray:
    """
    Draw the labelled training documents.

    Args:
        split: Split assignment
        proportion: Fraction of the train split to label, in (0, 1]
        seed: Seed of the draw

    Returns:
        Boolean mask over documents with round(proportion * |train|) train
        documents set, sampled uniformly without replacement

    Raises:
        ValueError: If the proportion is out of range or selects no document
    """
    if not 0.0 < proportion <= 1.0:
        raise ValueError(f"Label proportion must be in (0, 1], got {proportion}")

    train_idx = split.indices(Split.TRAIN)
    if len(train_idx) == 0:
        raise ValueError("The train split is empty")

    n_labelled = round_half_up(proportion * len(train_idx))
    if n_labelled == 0:
        raise ValueError(
            f"Label proportion {proportion} selects no document out of {len(train_idx)} train documents"
        )

    rng = RandomSource(seed).substream("labels")
    chosen = rng.choice(train_idx, size=n_labelled, replace=False)

    mask = np.zeros(len(split), dtype=bool)
    mask[chosen] = True
    return mask


def save_split(path: Path, doc_ids: Sequence[str], split: SplitAssignment) -> None:
    """Write the `doc_id,split,labelled` CSV."""
    frame = pd.DataFrame({
        "doc_id": list(doc_ids),
        "split": [s.value for s in split.splits],
        "labelled": [int(flag) for flag in split.labelled_mask],
    })
    frame.to_csv(path, index=False, lineterminator="\n")


def load_split(path: Path, doc_ids: Sequence[str]) -> SplitAssignment:
    """
    Read a split CSV and align it with the corpus document order.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the file does not cover exactly the given documents
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Split file not found: {path}")

    frame = pd.read_csv(path, dtype={"doc_id": str, "split": str, "labelled": int}, keep_default_na=False)
    by_id = {row.doc_id: (row.split, row.labelled) for row in frame.itertuples(index=False)}
    if len(by_id) != len(frame) or set(by_id) != set(doc_ids):
        raise ValueError(f"{path}: split rows do not match the corpus documents")

    splits = [Split(by_id[doc_id][0]) for doc_id in doc_ids]
    labelled = [bool(by_id[doc_id][1]) for doc_id in doc_ids]
    return SplitAssignment(splits=splits, labelled_mask=labelled)


def split_table(corpus: ProcessedCorpus, split: SplitAssignment) -> list[dict]:
    """
    Count documents per class and split.

    Returns:
        One row per class plus a final "Total" row, each with keys
        class/train/validation/test
    """
    labels = corpus.label_array()
    rows = []
    for class_id, name in enumerate(corpus.class_names):
        in_class = labels == class_id
        row = {"class": name}
        for s in Split:
            row[s.value] = int(np.sum(in_class & split.mask(s)))
        rows.append(row)

    total = {"class": "Total"}
    for s in Split:
        total[s.value] = sum(row[s.value] for row in rows)
    rows.append(total)
    return rows


def render_split_table(rows: list[dict]) -> str:
    """Render split_table rows as a markdown table."""
    md = "| Class | Train | Validation | Test |\n|-------|------:|-----------:|-----:|\n"
    for row in rows:
        name = f"**{row['class']}**" if row["class"] == "Total" else row["class"]
        md += f"| {name} | {row['train']:,} | {row['validation']:,} | {row['test']:,} |\n"
    return md
