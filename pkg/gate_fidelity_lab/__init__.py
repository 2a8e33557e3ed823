"""gate-fidelity-lab: Monte Carlo estimation of the average fidelity of quantum gates.

Implements three sampling protocols for the average gate fidelity of an
n-qubit unitary under a noisy channel: operator sampling through the
channel-state isomorphism (A), sampling over the d+1 mutually unbiased bases
as a state two-design (B), and two classical fidelities over a pair of
unbiased bases that bound the average fidelity (C).  Exact brute-force
oracles and resource tables accompany every estimator.  The ``run``
subcommand drives experiments from a JSON config.
"""

__version__ = "0.1.0"
