"""Reconstruct and analyze the edit history of Markdown posts.

The package ingests versioned post bodies, splits each version into text and
code blocks, links blocks across versions with configurable similarity
metrics, and derives line diffs, link tables, and evolution statistics from
the reconstructed histories.
"""

__version__ = "0.1.0"
