"""Lemma catalog shipped as package data."""
