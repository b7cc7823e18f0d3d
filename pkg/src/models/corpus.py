"""
Corpus data models.

Type-safe models for raw documents, the processed corpus, its vocabulary and
the train/validation/test assignment.
"""
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, PrivateAttr, field_validator, model_validator

from src.constants import Split


class RawDocument(BaseModel):
    """A dataset row before preprocessing."""

    id: str = Field(..., min_length=1, description="Opaque document identifier")
    content: str = Field(..., description="UTF-8 article text")
    category: str = Field(..., min_length=1, description="Class label string")


class Vocabulary(BaseModel):
    """Bijective token <-> id map with corpus and document frequencies."""

    tokens: list[str] = Field(default_factory=list, description="id -> token")
    frequency: list[int] = Field(default_factory=list, description="Corpus frequency per id")
    doc_frequency: list[int] = Field(default_factory=list, description="Document frequency per id")

    _index: dict[str, int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_tables(self) -> "Vocabulary":
        if not (len(self.tokens) == len(self.frequency) == len(self.doc_frequency)):
            raise ValueError("Vocabulary tables must have the same length")
        index = {token: i for i, token in enumerate(self.tokens)}
        if len(index) != len(self.tokens):
            raise ValueError("Vocabulary tokens must be unique")
        if any(df < 1 for df in self.doc_frequency):
            raise ValueError("Every vocabulary token needs document frequency >= 1")
        self._index = index
        return self

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def id_of(self, token: str) -> int:
        """Get the id of a token (KeyError if absent)."""
        return self._index[token]

    def get(self, token: str) -> Optional[int]:
        return self._index.get(token)

    @property
    def token_to_id(self) -> dict[str, int]:
        return dict(self._index)


class ProcessedCorpus(BaseModel):
    """Documents as token-id sequences with labels and class names."""

    doc_ids: list[str] = Field(..., description="Document identifiers, in corpus order")
    documents: list[list[int]] = Field(..., description="Token-id sequence per document")
    labels: list[int] = Field(..., description="Class index per document")
    class_names: list[str] = Field(..., description="Ordered class names")
    vocabulary: Vocabulary

    @field_validator("class_names")
    @classmethod
    def _at_least_two_classes(cls, value: list[str]) -> list[str]:
        if len(value) < 2:
            raise ValueError(f"A corpus needs at least 2 classes, got {len(value)}")
        if len(set(value)) != len(value):
            raise ValueError("Class names must be unique")
        return value

    @model_validator(mode="after")
    def _check_documents(self) -> "ProcessedCorpus":
        n_docs = len(self.documents)
        if not (len(self.doc_ids) == n_docs == len(self.labels)):
            raise ValueError("doc_ids, documents and labels must have the same length")
        vocab_size = len(self.vocabulary)
        n_classes = len(self.class_names)
        for position, (doc, label) in enumerate(zip(self.documents, self.labels)):
            if not doc:
                raise ValueError(f"Document {self.doc_ids[position]} is empty")
            if not 0 <= label < n_classes:
                raise ValueError(f"Document {self.doc_ids[position]} has label {label} outside [0, {n_classes})")
            if max(doc) >= vocab_size or min(doc) < 0:
                raise ValueError(f"Document {self.doc_ids[position]} has a token id outside the vocabulary")
        return self

    @property
    def n_docs(self) -> int:
        return len(self.documents)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def label_array(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=np.int64)

    def token_documents(self) -> list[list[str]]:
        """Documents as token strings."""
        tokens = self.vocabulary.tokens
        return [[tokens[i] for i in doc] for doc in self.documents]


class SplitAssignment(BaseModel):
    """Per-document split tags and the labelled-node mask."""

    splits: list[Split] = Field(..., description="Split tag per document")
    labelled_mask: list[bool] = Field(..., description="True for train documents whose labels drive the loss")

    @model_validator(mode="after")
    def _mask_inside_train(self) -> "SplitAssignment":
        if len(self.splits) != len(self.labelled_mask):
            raise ValueError("splits and labelled_mask must have the same length")
        for split, labelled in zip(self.splits, self.labelled_mask):
            if labelled and split != Split.TRAIN:
                raise ValueError("labelled_mask may only be true on train documents")
        return self

    def __len__(self) -> int:
        return len(self.splits)

    def mask(self, split: Split) -> np.ndarray:
        """Boolean mask of the documents in a split."""
        return np.array([s == split for s in self.splits], dtype=bool)

    def indices(self, split: Split) -> np.ndarray:
        return np.flatnonzero(self.mask(split))

    def labelled(self) -> np.ndarray:
        return np.asarray(self.labelled_mask, dtype=bool)

    def with_labelled(self, mask) -> "SplitAssignment":
        """Copy of this assignment with a different labelled mask."""
        return SplitAssignment(splits=list(self.splits), labelled_mask=[bool(x) for x in mask])

    def sizes(self) -> dict[str, int]:
        return {split.value: int(self.mask(split).sum()) for split in Split}
