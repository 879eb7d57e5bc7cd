"""Unit tests for the gnetm package."""
