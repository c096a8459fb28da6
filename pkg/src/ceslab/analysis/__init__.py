"""Verification routines. Submodules are imported explicitly by callers."""
