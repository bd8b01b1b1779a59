"""Numerical ranges of products of projections, positive contractions and essentially Hermitian matrices."""
