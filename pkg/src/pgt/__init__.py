"""Permutation-group toolkit: bases, distinguishing colorings, affine constructions."""
