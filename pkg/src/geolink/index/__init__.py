"""Full-text sentence index."""

from geolink.index.inverted import SearchHit, SentenceIndex, tokenize

__all__ = ["SentenceIndex", "SearchHit", "tokenize"]
