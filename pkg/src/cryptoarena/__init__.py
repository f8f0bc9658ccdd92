"""Execution infrastructure for a cryptographic protocol-negotiation benchmark.

Subpackages:

* ``cryptomath`` - deterministic calculator operations
* ``wire`` - JSON envelope, dispatch, HTTP and CLI transport
* ``arena`` - challenge loading and self-play match execution
* ``judge`` - validators, judge prompts and strict verdict parsing
* ``analytics`` - score normalization, aggregation and paired statistics
"""

__version__ = "0.1.0"
