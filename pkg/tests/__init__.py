"""Tests for gate-fidelity-lab."""
