"""
Review tokenization.
"""
import re
import unicodedata
from functools import lru_cache
from pathlib import Path

from django.conf import settings

TOKEN_PATTERN = re.compile(r'[^\W_]+')


def read_stopwords(path):
    """Read one stopword per line; ``#`` lines are comments."""
    words = set()
    with open(path, encoding='utf-8') as handle:
        for line in handle:
            word = line.strip().lower()
            if word and not word.startswith('#'):
                words.add(word)
    return frozenset(words)


@lru_cache(maxsize=None)
def load_stopwords(path=None):
    """Stopwords from ``path``, defaulting to the bundled English list."""
    return read_stopwords(Path(path or settings.RECBENCH['STOPWORDS_PATH']))


def tokenize(text, stopwords=None):
    """NFC-normalise, lowercase and split on non-alphanumeric runs.

    Stopwords are dropped.
    """
    if stopwords is None:
        stopwords = load_stopwords()
    text = unicodedata.normalize('NFC', text).lower()
    return [
        token for token in TOKEN_PATTERN.findall(text)
        if token not in stopwords
    ]
