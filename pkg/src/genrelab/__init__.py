"""Toolkit for building and classifying a four-genre life-science corpus.

Submodules: ``corpus`` (types, ingestion, manifests), ``cleaning``,
``balance``, ``citations``, ``features``, ``models``, ``explain``,
``evaluation``, ``cluster``, ``synth`` (synthetic benchmark corpus), and
``cli``.
"""

__version__ = "0.1.0"
