"""Privacy-preserving farm-data collaboration platform.

Farmers upload tabular data to isolated per-owner compute slots, discover
similar peers through locally-noised sketches, co-train models by federated
averaging, and publish models with membership-inference risk scores. Raw
rows never leave the owner's compute slot.
"""

__version__ = "0.1.0"
