from . import *
import numpy as np


def to_jsonable(obj):
    """Recursively convert Fractions, infinities and numpy values to JSON-safe forms."""
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return 'nan' if math.isnan(obj) else ('inf' if obj > 0 else '-inf')
    return obj


def serialize_orjson(obj):
    import orjson

    return orjson.dumps(
        to_jsonable(obj),
        option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY,
    ).decode('utf-8')


def serialize_json(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)


def serialize_json_fast(obj, serializer=None):
    if get_serializer_type(serializer) == 'orjson':
        try:
            return serialize_orjson(obj)
        except ImportError:
            pass
    return serialize_json(obj)


def deserialize_json(data):
    try:
        import orjson

        return orjson.loads(data)
    except ImportError:
        return json.loads(data)


def read_json(path):
    try:
        with open(path, 'rb') as f:
            return deserialize_json(f.read())
    except (ValueError, TypeError) as e:
        raise SchemaError(f'Could not parse JSON from {path}: {e}')


def write_json(obj, path=None, timestamp=False):
    """Write obj as sorted, indented JSON. A timestamp, when wanted, lives only under TIMESTAMP_KEY."""
    if timestamp and isinstance(obj, dict):
        from datetime import datetime, timezone

        obj = {**obj, TIMESTAMP_KEY: datetime.now(timezone.utc).isoformat(timespec='seconds')}
    text = serialize_json_fast(obj)
    if path is None or path == '-':
        sys.stdout.write(text + '\n')
        return text
    ensure_dir(path)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text + '\n')
    log.debug(f'wrote {path}')
    return path
