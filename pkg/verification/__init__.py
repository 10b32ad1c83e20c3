"""Hypothesis checklist, seven-step audit and the non-vacuousness check."""
