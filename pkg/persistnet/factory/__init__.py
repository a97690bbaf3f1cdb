from .component_factory import DegreeLaw, ModelFactory

__all__ = ["DegreeLaw", "ModelFactory"]
