"""
Label tokenization for the sub-word inverted index.

Without a vocabulary, labels are split into lowercase word tokens. With a
vocabulary file (one token per line, continuation tokens prefixed with
``##``), every word is further segmented by greedy longest match.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Union

logger = logging.getLogger(__name__)

CONTINUATION_PREFIX = "##"

_WORD_PATTERN = re.compile(r"[^\W_]+")


class _VocabLoader:
    """
    Singleton cache of vocabulary files.

    A vocabulary is read once per path and process, however many indexes or
    matchers use it.
    """

    _instance: Optional["_VocabLoader"] = None
    _vocabs: Dict[str, FrozenSet[str]] = {}

    def __new__(cls) -> "_VocabLoader":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._vocabs = {}
        return cls._instance

    def get_vocab(self, path: Union[str, Path]) -> FrozenSet[str]:
        """
        Get or load a vocabulary.

        Args:
            path: UTF-8 text file with one token per line.

        Returns:
            FrozenSet[str]: Lowercased tokens.
        """
        key = str(Path(path).resolve())
        if key not in self._vocabs:
            self._vocabs[key] = self._load_vocab(Path(path))
        return self._vocabs[key]

    @staticmethod
    def _load_vocab(path: Path) -> FrozenSet[str]:
        tokens = frozenset(
            line.strip().lower()
            for line in path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        )
        logger.info(f"Loaded vocabulary of {len(tokens)} tokens from {path}")
        return tokens


class Tokenizer:
    """
    Lowercasing word tokenizer with optional greedy sub-word segmentation.

    Example:
        >>> Tokenizer().tokenize(["Heart Attack"])
        ['heart', 'attack']
        >>> Tokenizer({"heart", "att", "##ack"}).tokenize(["heartattack"])
        ['heart', 'att', '##ack']
    """

    def __init__(self, vocab: Optional[Iterable[str]] = None) -> None:
        """
        Initialize the tokenizer.

        Args:
            vocab: Sub-word vocabulary. None selects plain word tokens.
        """
        self._vocab: Optional[FrozenSet[str]] = (
            None if vocab is None else frozenset(t.lower() for t in vocab)
        )
        self._max_piece = max((len(t) for t in self._vocab or ()), default=0)

    @classmethod
    def from_vocab_file(cls, path: Optional[Union[str, Path]]) -> "Tokenizer":
        """Create a tokenizer from a vocabulary file, or a word tokenizer for None."""
        if path is None:
            return cls()
        return cls(_VocabLoader().get_vocab(path))

    @property
    def vocab(self) -> Optional[FrozenSet[str]]:
        return self._vocab

    def tokenize(self, labels: Iterable[str]) -> List[str]:
        """
        Tokenize a list of labels.

        Args:
            labels: Label strings; empty strings contribute nothing.

        Returns:
            List[str]: Tokens of all labels, in order.
        """
        tokens: List[str] = []
        for label in labels:
            for word in _WORD_PATTERN.findall(label.lower()):
                tokens.extend(self._segment(word) if self._vocab else [word])
        return tokens

    def _segment(self, word: str) -> List[str]:
        """
        Greedy longest-match segmentation of one word.

        At a continuation position the ``##`` form of a piece is preferred,
        the bare form is accepted too. A word that cannot be fully segmented
        is returned as a single token.
        """
        assert self._vocab is not None
        pieces: List[str] = []
        start = 0
        while start < len(word):
            end = min(len(word), start + self._max_piece)
            piece = None
            while end > start:
                candidate = word[start:end]
                if start > 0 and CONTINUATION_PREFIX + candidate in self._vocab:
                    piece = CONTINUATION_PREFIX + candidate
                    break
                if candidate in self._vocab:
                    piece = candidate
                    break
                end -= 1
            if piece is None:
                return [word]
            pieces.append(piece)
            start = end
        return pieces


def tokenize(labels: Iterable[str], vocab: Optional[Iterable[str]] = None) -> List[str]:
    """Tokenize labels with a throwaway Tokenizer."""
    return Tokenizer(vocab).tokenize(labels)
