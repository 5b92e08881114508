"""Semantic relations-based unsupervised framing analysis (SUFA).

Extracts entity-centric framing components, pairs of words joined by a
dependency relation, from parsed news text; aggregates them by outlet and
political leaning; and groups them into candidate frames by clustering or
human coding.
"""

__version__ = "0.1.0"
