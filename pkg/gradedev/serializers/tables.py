from . import *


def write_csv(df, path=None):
    """Write a DataFrame as CSV with round-trippable floats."""
    text = df.to_csv(index=False, float_format='%.17g', lineterminator='\n')
    if path is None or path == '-':
        sys.stdout.write(text)
        return text
    ensure_dir(path)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    log.debug(f'wrote {path} ({len(df)} rows)')
    return path


def read_csv(path):
    import pandas as pd

    return pd.read_csv(path)
