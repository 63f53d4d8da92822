"""colorbasis: cross-lingual lexicon analytics for color vocabulary.

Builds computable evidence for how "basic" each color word is, from
multilingual dictionary data, corpus summaries, human concreteness
ratings, etymology tables, and elicitation surveys, then aggregates the
evidence into a ranking and measures its rank association with the
basic/secondary partition and the acquisition sequence.
"""

__version__ = "0.1.0"
