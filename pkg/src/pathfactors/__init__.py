"""Constructive {P2, P7}- and {P2, P9}-factors with certificates."""
