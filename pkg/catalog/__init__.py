from catalog.registry import Catalog, catalog_arrangement, default_catalog, is_catalog_ref

__all__ = ["Catalog", "catalog_arrangement", "default_catalog", "is_catalog_ref"]
