"""Exhaustive verification of set, semigroup and group linear algebras over finite carriers."""
