"""gene-atlas: a cultural-gene collection platform for ethnic costumes.

Three-layer costume metadata (surface / middle / inner), seeded k-means
color extraction, double-coder annotation reconciliation, gene-first faceted
exploration, and scaffolded AI co-creation, persisted as line-delimited JSON
and served over HTTP.
"""

__version__ = "0.1.0"
