"""Exact verification and re-derivation of witness identities for
p(49n+19), p(49n+33), p(49n+40) = 0 (mod 49)."""

__version__ = "0.1.0"
