#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Writes the fixed 4x3x3x3 test problems and their reference blocks to data/.

D is formed here with plain nested loops over the index tuples so the
fixtures do not depend on the C++ contraction code.
"""
import itertools
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

# Frontal slices T(:, :, k, l) listed by (k, l); each is a list of rows.
A_SLICES = {
    (1, 1): [[11, 7, 7], [-2, 11, -2], [11, -2, 7], [-2, 11, -2]],
    (2, 1): [[-2, -2, -2], [3, -2, 3], [-2, 3, -2], [3, -2, 3]],
    (3, 1): [[3, -4, -4], [-1, 3, -1], [3, -1, -4], [-1, 3, -1]],
    (4, 1): [[2, -9, -9], [-6, 2, -6], [2, -6, -9], [-6, 2, -6]],
    (1, 2): [[0, 7, 7], [11, 0, 11], [0, 11, 7], [11, 0, 11]],
    (2, 2): [[-16, 3, 3], [-11, -16, -11], [-16, -11, 3], [-11, -16, -11]],
    (3, 2): [[-11, 15, 15], [0, -11, 0], [-11, 0, 15], [0, -11, 0]],
    (4, 2): [[-4, -2, -2], [16, -4, 16], [-4, 16, -2], [16, -4, 16]],
    (1, 3): [[3, -3, -3], [13, 3, 13], [3, 13, -3], [13, 3, 13]],
    (2, 3): [[26, 0, 0], [-4, 26, -4], [26, -4, 0], [-4, 26, -4]],
    (3, 3): [[-4, 1, 1], [8, -4, 8], [-4, 8, 1], [8, -4, 8]],
    (4, 3): [[2, -8, -8], [-16, 2, -16], [2, -16, -8], [-16, 2, -16]],
}

C_SLICES = {
    (1, 1): [[10, 0, 6], [15, 10, 10], [10, 15, 10]],
    (2, 1): [[6, -9, 17], [-9, 6, 6], [6, -9, 6]],
    (3, 1): [[4, -19, -3], [-14, 4, 4], [4, -14, 4]],
    (1, 2): [[9, -22, -8], [0, 9, 9], [9, 0, 9]],
    (2, 2): [[0, -9, -3], [-13, 0, 0], [0, -13, 0]],
    (3, 2): [[-7, -17, 12], [6, -7, -7], [-7, 6, -7]],
    (1, 3): [[0, -3, 4], [5, 0, 0], [0, 5, 0]],
    (2, 3): [[5, -13, 1], [-5, 5, 5], [5, -5, 5]],
    (3, 3): [[0, -12, 3], [-1, 0, 0], [0, -1, 0]],
}

X0_SLICES = {
    (1, 1): [[0, 11, -10], [-7, -1, -4], [-4, -4, 5], [7, -6, -5]],
    (2, 1): [[4, -11, -12], [-3, 6, -20], [-13, 4, 0], [6, -6, -4]],
    (3, 1): [[-5, 11, 0], [-16, -2, 4], [33, -2, -1], [-16, -8, 9]],
    (1, 2): [[7, 6, -4], [14, -4, -11], [-13, -32, 9], [-28, 0, -10]],
    (2, 2): [[-10, 5, 18], [-6, -8, 8], [-16, -4, 8], [-12, -4, 9]],
    (3, 2): [[-7, 11, 4], [-4, -1, 0], [-14, -5, -21], [4, 6, 14]],
    (1, 3): [[1, 1, 4], [7, 21, -5], [-4, 2, 0], [-16, 5, -18]],
    (2, 3): [[9, 4, 5], [2, -2, -4], [-7, -2, 13], [-16, 6, -4]],
    (3, 3): [[0, -9, 1], [8, -16, -14], [9, -15, -12], [-19, -3, -2]],
}

# Reference solutions, four decimals, same slice layout.
MIN_NORM_SLICES = {
    (1, 1): [[42.9784, 46.3496, 53.2346], [53.0555, 68.2438, 49.0433],
             [54.4996, 54.9506, 59.0609], [61.1020, 53.8303, 73.3694]],
    (2, 1): [[32.9897, 36.6903, 42.0641], [38.3122, 47.6399, 40.5920],
             [39.5236, 41.8336, 45.8862], [43.1914, 41.8239, 53.2235]],
    (3, 1): [[46.9887, 50.6593, 56.1705], [52.7434, 62.6039, 54.4513],
             [53.9760, 56.1170, 60.1748], [57.9106, 56.0063, 68.1459]],
    (1, 2): [[37, 41, 45], [38, 42, 46], [39, 43, 47], [40, 44, 48]],
    (2, 2): [[50.9990, 54.9690, 59.1064], [52.4312, 56.9640, 59.8592],
             [53.4524, 57.2834, 61.2886], [54.7191, 58.1824, 62.9224]],
    (3, 2): [[41.0103, 45.3097, 47.9359], [37.6878, 36.3601, 51.4080],
             [38.4764, 44.1664, 48.1138], [36.8086, 46.1761, 42.7765]],
    (1, 3): [[73, 77, 81], [74, 78, 82], [75, 79, 83], [76, 80, 84]],
    (2, 3): [[57.0144, 61.4336, 63.5103], [51.9630, 48.5042, 67.9711],
             [52.6669, 59.0329, 62.9594], [49.9320, 61.4465, 55.0871]],
    (3, 3): [[59.0196, 63.5885, 64.9782], [51.8069, 45.6842, 70.6751],
             [52.4051, 59.6161, 63.5163], [48.3363, 62.5345, 52.4753]],
}

NEAREST_SLICES = {
    (1, 1): [[44.1912, 54.1943, 43.7075], [50.4602, 68.6229, 49.3393],
             [48.1731, 53.1240, 62.4182], [79.5249, 53.7313, 65.1154]],
    (2, 1): [[39.4807, 25.7036, 37.5108], [39.1969, 44.5352, 36.9080],
             [41.6060, 39.9043, 56.2875], [45.9264, 37.6248, 44.2264]],
    (3, 1): [[40.5057, 59.6836, 56.9232], [41.8432, 65.1252, 55.9031],
             [83.6837, 59.5245, 59.2572], [52.0225, 56.2288, 71.7468]],
    (1, 2): MIN_NORM_SLICES[(1, 2)],
    (2, 2): [[41.7494, 54.6924, 71.7399], [49.8603, 58.7485, 67.0232],
             [33.7992, 61.6395, 66.1633], [53.6123, 55.2035, 71.7550]],
    (3, 2): [[34.5193, 56.2964, 52.4892], [36.8031, 39.4648, 55.0920],
             [36.3940, 46.0957, 37.7125], [34.0736, 50.3752, 51.7736]],
    (1, 3): MIN_NORM_SLICES[(1, 3)],
    (2, 3): [[66.1178, 55.6214, 63.4721], [57.5053, 53.0468, 68.9621],
             [44.5545, 56.3846, 70.5580], [50.0412, 66.5350, 56.9444]],
    (3, 3): [[64.4359, 52.8083, 61.1574], [62.3311, 36.4565, 60.7722],
             [56.7895, 56.3274, 48.6033], [36.7992, 60.3013, 46.4383]],
}


def from_slices(slices, extents):
    """Dict keyed by 0-based index tuples."""
    out = {}
    for (k, l), rows in slices.items():
        for i1, row in enumerate(rows):
            for i2, v in enumerate(row):
                out[(i1, i2, k - 1, l - 1)] = float(v)
    assert len(out) == extents[0] * extents[1] * extents[2] * extents[3]
    return out


def flatten(t, extents):
    """First index fastest."""
    data = []
    for idx in itertools.product(*(range(e) for e in reversed(extents))):
        data.append(t[tuple(reversed(idx))])
    return data


def tensor_json(t, rows, cols):
    return {"row_extents": rows, "col_extents": cols, "data": flatten(t, rows + cols)}


def operator(a, c, x, i_ext, j_ext):
    """A *_2 X + X *_2 C by explicit sums."""
    d = {}
    i_range = list(itertools.product(*(range(e) for e in i_ext)))
    j_range = list(itertools.product(*(range(e) for e in j_ext)))
    for i in i_range:
        for j in j_range:
            s = 0.0
            for k in i_range:
                s += a[i + k] * x[k + j]
            for l in j_range:
                s += x[i + l] * c[l + j]
            d[i + j] = s
    return d


def main():
    i_ext, j_ext = [4, 3], [3, 3]
    a = from_slices(A_SLICES, i_ext + i_ext)
    c = from_slices(C_SLICES, j_ext + j_ext)
    x0 = from_slices(X0_SLICES, i_ext + j_ext)
    x_star = {}
    for n, idx in enumerate(itertools.product(*(range(e) for e in reversed(i_ext + j_ext)))):
        x_star[tuple(reversed(idx))] = float(n + 1)
    d = operator(a, c, x_star, i_ext, j_ext)

    base = {
        "A": tensor_json(a, i_ext, i_ext),
        "C": tensor_json(c, j_ext, j_ext),
        "D": tensor_json(d, i_ext, j_ext),
        "X_exact": tensor_json(x_star, i_ext, j_ext),
    }
    DATA.mkdir(exist_ok=True)
    (DATA / "fixed_min_norm.json").write_text(json.dumps(base, indent=1) + "\n")
    (DATA / "fixed_nearness.json").write_text(
        json.dumps(dict(base, X0=tensor_json(x0, i_ext, j_ext)), indent=1) + "\n")
    (DATA / "fixed_min_norm_expected.json").write_text(
        json.dumps(tensor_json(from_slices(MIN_NORM_SLICES, i_ext + j_ext), i_ext, j_ext),
                   indent=1) + "\n")
    (DATA / "fixed_nearness_expected.json").write_text(
        json.dumps(tensor_json(from_slices(NEAREST_SLICES, i_ext + j_ext), i_ext, j_ext),
                   indent=1) + "\n")


if __name__ == "__main__":
    main()
