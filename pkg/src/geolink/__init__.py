"""geolink: a geospatial knowledge-linkage service.

Ingests documents, area polygons, and sensor feeds; links them in an
incremental property graph; and answers restriction, search, co-occurrence,
and aggregation queries through a single authenticated HTTP gateway.
"""

__version__ = "0.1.0"
