"""Convert the 10,000 MNIST digits bundled in the npm `mnist` package to IDX.

Usage:
    npm pack mnist && tar xzf mnist-*.tgz
    python3 scripts/mnist_from_npm.py package/src/digits data/mnist

The package stores each pixel as value/255 rounded to three decimals, so
round(x * 255) recovers the original byte exactly. Images are written grouped
by digit (all zeros, then all ones, ...); callers are expected to shuffle.
"""

import gzip
import json
import struct
import sys
from pathlib import Path


def main(src: Path, dst: Path) -> None:
    pixels = bytearray()
    labels = bytearray()
    for digit in range(10):
        data = json.loads((src / f"{digit}.json").read_text())["data"]
        assert len(data) % 784 == 0
        pixels.extend(round(x * 255) for x in data)
        labels.extend([digit] * (len(data) // 784))
    n = len(labels)
    dst.mkdir(parents=True, exist_ok=True)
    with gzip.GzipFile(dst / "digits-images-idx3-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x00000803, n, 28, 28))
        f.write(pixels)
    with gzip.GzipFile(dst / "digits-labels-idx1-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x00000801, n))
        f.write(labels)
    print(f"wrote {n} images to {dst}")


if __name__ == "__main__":
    main(Path(sys.argv[1]), Path(sys.argv[2]))
