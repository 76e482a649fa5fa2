"""tenderscreen: bid-distribution screens and cartel classifiers for
procurement tenders, with batch (traffic-light) and live (category-manager)
screening workflows."""

__version__ = "0.1.0"
