"""
mpsched - Multipath scheduling simulator

Deterministic discrete-event simulation of MPTCP-style subflow scheduling
(QueueAware, minSRTT and baselines), a parallel-server queueing model with
analytical oracles, and a batch experiment harness.
"""

__version__ = "1.0.0"
