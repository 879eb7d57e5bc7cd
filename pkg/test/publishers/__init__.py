"""Tests for the CSV and JSON publishers."""
