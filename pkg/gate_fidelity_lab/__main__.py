"""Entry point for python -m gate_fidelity_lab."""

from .cli import main

if __name__ == "__main__":
    main()
