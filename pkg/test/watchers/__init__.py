"""Tests for the machine watchers."""
