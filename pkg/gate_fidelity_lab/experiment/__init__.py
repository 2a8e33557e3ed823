"""Experiment runner behind ``gate-fidelity-lab run``.

Builds gate, noise and protocols from a validated config, runs the
estimators and the oracle, records consistency checks and writes the
reports.

Entry point: ``gate_fidelity_lab.experiment.runner.run_experiment()``
"""
