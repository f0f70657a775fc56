from data.repositories.artifact_repository import FileArtifactRepository, load_json_file, read_float

__all__ = ["FileArtifactRepository", "load_json_file", "read_float"]
