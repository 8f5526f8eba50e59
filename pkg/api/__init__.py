"""Monge-Ampere solver API."""
