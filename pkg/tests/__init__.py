"""Test suite for hogwarts-bench."""
