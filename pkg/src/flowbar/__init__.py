"""Video navigation backend: transcript enrichment, relevance search,
catalog/telemetry service, and interaction-log analytics."""

__version__ = "0.1.0"
