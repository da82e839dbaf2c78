"""Scenario harness: synthetic farmers, end-to-end drives, reports."""
