"""Desk-scale sieve experiments on the product set."""
