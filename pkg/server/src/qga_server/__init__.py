"""Generation server for the qga pipeline's wire protocol.

Standalone package: it talks to the pipeline only through the HTTP
contract in protocol/PROTOCOL.md and the input/output JSONL rows the
pipeline's prepare commands write. It never imports the qga package.
"""

__version__ = "0.1.0"
