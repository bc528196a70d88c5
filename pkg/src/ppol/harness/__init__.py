"""Workloads, transcripts, attack scenarios and benchmarks."""
