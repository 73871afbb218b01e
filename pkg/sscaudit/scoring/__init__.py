"""Answer extraction, metrics, bootstrap intervals and reports."""
