"""Errors, matrix types and dense linear algebra."""
