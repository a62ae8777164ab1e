"""Fire containment on square lattices.

Exact deploy-then-spread simulation, shell-expansion verification, a 0-1
optimizer for minimum-burn and deadline questions, and a turn-based service.
"""

__version__ = "0.1.0"
