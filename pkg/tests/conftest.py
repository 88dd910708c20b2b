"""Keeps this directory on sys.path so the oracle helper modules import."""
