"""Primitive polynomials over GF(2), one per degree 2..128.

Each entry maps a degree ``m`` to the exponents of a primitive trinomial or
pentanomial (lowest weight, then lexicographically smallest middle terms) and
the prime factorization of ``2**m - 1``, which is the multiplicative order of
any primitive polynomial of that degree.
"""

PRIMITIVE_POLYS: dict[int, tuple[tuple[int, ...], tuple[tuple[int, int], ...]]] = {
    2: ((2, 1, 0), ((3, 1),)),
    3: ((3, 1, 0), ((7, 1),)),
    4: ((4, 1, 0), ((3, 1), (5, 1))),
    5: ((5, 2, 0), ((31, 1),)),
    6: ((6, 1, 0), ((3, 2), (7, 1))),
    7: ((7, 1, 0), ((127, 1),)),
    8: ((8, 7, 2, 1, 0), ((3, 1), (5, 1), (17, 1))),
    9: ((9, 4, 0), ((7, 1), (73, 1))),
    10: ((10, 3, 0), ((3, 1), (11, 1), (31, 1))),
    11: ((11, 2, 0), ((23, 1), (89, 1))),
    12: ((12, 8, 2, 1, 0), ((3, 2), (5, 1), (7, 1), (13, 1))),
    13: ((13, 5, 2, 1, 0), ((8191, 1),)),
    14: ((14, 12, 2, 1, 0), ((3, 1), (43, 1), (127, 1))),
    15: ((15, 1, 0), ((7, 1), (31, 1), (151, 1))),
    16: ((16, 12, 3, 1, 0), ((3, 1), (5, 1), (17, 1), (257, 1))),
    17: ((17, 3, 0), ((131071, 1),)),
    18: ((18, 7, 0), ((3, 3), (7, 1), (19, 1), (73, 1))),
    19: ((19, 5, 2, 1, 0), ((524287, 1),)),
    20: ((20, 3, 0), ((3, 1), (5, 2), (11, 1), (31, 1), (41, 1))),
    21: ((21, 2, 0), ((7, 2), (127, 1), (337, 1))),
    22: ((22, 1, 0), ((3, 1), (23, 1), (89, 1), (683, 1))),
    23: ((23, 5, 0), ((47, 1), (178481, 1))),
    24: ((24, 7, 2, 1, 0), ((3, 2), (5, 1), (7, 1), (13, 1), (17, 1), (241, 1))),
    25: ((25, 3, 0), ((31, 1), (601, 1), (1801, 1))),
    26: ((26, 6, 2, 1, 0), ((3, 1), (2731, 1), (8191, 1))),
    27: ((27, 5, 2, 1, 0), ((7, 1), (73, 1), (262657, 1))),
    28: ((28, 3, 0), ((3, 1), (5, 1), (29, 1), (43, 1), (113, 1), (127, 1))),
    29: ((29, 2, 0), ((233, 1), (1103, 1), (2089, 1))),
    30: ((30, 23, 2, 1, 0), ((3, 2), (7, 1), (11, 1), (31, 1), (151, 1), (331, 1))),
    31: ((31, 3, 0), ((2147483647, 1),)),
    32: ((32, 22, 2, 1, 0), ((3, 1), (5, 1), (17, 1), (257, 1), (65537, 1))),
    33: ((33, 13, 0), ((7, 1), (23, 1), (89, 1), (599479, 1))),
    34: ((34, 27, 2, 1, 0), ((3, 1), (43691, 1), (131071, 1))),
    35: ((35, 2, 0), ((31, 1), (71, 1), (127, 1), (122921, 1))),
    36: ((36, 11, 0), ((3, 3), (5, 1), (7, 1), (13, 1), (19, 1), (37, 1), (73, 1), (109, 1))),
    37: ((37, 9, 2, 1, 0), ((223, 1), (616318177, 1))),
    38: ((38, 13, 3, 1, 0), ((3, 1), (174763, 1), (524287, 1))),
    39: ((39, 4, 0), ((7, 1), (79, 1), (8191, 1), (121369, 1))),
    40: ((40, 35, 2, 1, 0), ((3, 1), (5, 2), (11, 1), (17, 1), (31, 1), (41, 1), (61681, 1))),
    41: ((41, 3, 0), ((13367, 1), (164511353, 1))),
    42: ((42, 29, 2, 1, 0), ((3, 2), (7, 2), (43, 1), (127, 1), (337, 1), (5419, 1))),
    43: ((43, 12, 2, 1, 0), ((431, 1), (9719, 1), (2099863, 1))),
    44: ((44, 38, 3, 1, 0), ((3, 1), (5, 1), (23, 1), (89, 1), (397, 1), (683, 1), (2113, 1))),
    45: ((45, 4, 3, 1, 0), ((7, 1), (31, 1), (73, 1), (151, 1), (631, 1), (23311, 1))),
    46: ((46, 9, 3, 1, 0), ((3, 1), (47, 1), (178481, 1), (2796203, 1))),
    47: ((47, 5, 0), ((2351, 1), (4513, 1), (13264529, 1))),
    48: ((48, 28, 3, 1, 0), ((3, 2), (5, 1), (7, 1), (13, 1), (17, 1), (97, 1), (241, 1), (257, 1), (673, 1))),
    49: ((49, 9, 0), ((127, 1), (4432676798593, 1))),
    50: ((50, 16, 2, 1, 0), ((3, 1), (11, 1), (31, 1), (251, 1), (601, 1), (1801, 1), (4051, 1))),
    51: ((51, 28, 2, 1, 0), ((7, 1), (103, 1), (2143, 1), (11119, 1), (131071, 1))),
    52: ((52, 3, 0), ((3, 1), (5, 1), (53, 1), (157, 1), (1613, 1), (2731, 1), (8191, 1))),
    53: ((53, 6, 2, 1, 0), ((6361, 1), (69431, 1), (20394401, 1))),
    54: ((54, 17, 2, 1, 0), ((3, 4), (7, 1), (19, 1), (73, 1), (87211, 1), (262657, 1))),
    55: ((55, 24, 0), ((23, 1), (31, 1), (89, 1), (881, 1), (3191, 1), (201961, 1))),
    56: ((56, 42, 2, 1, 0), ((3, 1), (5, 1), (17, 1), (29, 1), (43, 1), (113, 1), (127, 1), (15790321, 1))),
    57: ((57, 7, 0), ((7, 1), (32377, 1), (524287, 1), (1212847, 1))),
    58: ((58, 19, 0), ((3, 1), (59, 1), (233, 1), (1103, 1), (2089, 1), (3033169, 1))),
    59: ((59, 24, 2, 1, 0), ((179951, 1), (3203431780337, 1))),
    60: ((60, 1, 0), ((3, 2), (5, 2), (7, 1), (11, 1), (13, 1), (31, 1), (41, 1), (61, 1), (151, 1), (331, 1), (1321, 1))),
    61: ((61, 5, 2, 1, 0), ((2305843009213693951, 1),)),
    62: ((62, 28, 3, 1, 0), ((3, 1), (715827883, 1), (2147483647, 1))),
    63: ((63, 1, 0), ((7, 2), (73, 1), (127, 1), (337, 1), (92737, 1), (649657, 1))),
    64: ((64, 11, 2, 1, 0), ((3, 1), (5, 1), (17, 1), (257, 1), (641, 1), (65537, 1), (6700417, 1))),
    65: ((65, 18, 0), ((31, 1), (8191, 1), (145295143558111, 1))),
    66: ((66, 17, 2, 1, 0), ((3, 2), (7, 1), (23, 1), (67, 1), (89, 1), (683, 1), (20857, 1), (599479, 1))),
    67: ((67, 5, 2, 1, 0), ((193707721, 1), (761838257287, 1))),
    68: ((68, 9, 0), ((3, 1), (5, 1), (137, 1), (953, 1), (26317, 1), (43691, 1), (131071, 1))),
    69: ((69, 34, 2, 1, 0), ((7, 1), (47, 1), (178481, 1), (10052678938039, 1))),
    70: ((70, 5, 3, 1, 0), ((3, 1), (11, 1), (31, 1), (43, 1), (71, 1), (127, 1), (281, 1), (86171, 1), (122921, 1))),
    71: ((71, 6, 0), ((228479, 1), (48544121, 1), (212885833, 1))),
    72: ((72, 71, 4, 1, 0), ((3, 3), (5, 1), (7, 1), (13, 1), (17, 1), (19, 1), (37, 1), (73, 1), (109, 1), (241, 1), (433, 1), (38737, 1))),
    73: ((73, 25, 0), ((439, 1), (2298041, 1), (9361973132609, 1))),
    74: ((74, 22, 2, 1, 0), ((3, 1), (223, 1), (1777, 1), (25781083, 1), (616318177, 1))),
    75: ((75, 6, 3, 1, 0), ((7, 1), (31, 1), (151, 1), (601, 1), (1801, 1), (100801, 1), (10567201, 1))),
    76: ((76, 20, 2, 1, 0), ((3, 1), (5, 1), (229, 1), (457, 1), (174763, 1), (524287, 1), (525313, 1))),
    77: ((77, 10, 2, 1, 0), ((23, 1), (89, 1), (127, 1), (581283643249112959, 1))),
    78: ((78, 7, 2, 1, 0), ((3, 2), (7, 1), (79, 1), (2731, 1), (8191, 1), (121369, 1), (22366891, 1))),
    79: ((79, 9, 0), ((2687, 1), (202029703, 1), (1113491139767, 1))),
    80: ((80, 54, 2, 1, 0), ((3, 1), (5, 2), (11, 1), (17, 1), (31, 1), (41, 1), (257, 1), (61681, 1), (4278255361, 1))),
    81: ((81, 4, 0), ((7, 1), (73, 1), (2593, 1), (71119, 1), (262657, 1), (97685839, 1))),
    82: ((82, 32, 2, 1, 0), ((3, 1), (83, 1), (13367, 1), (164511353, 1), (8831418697, 1))),
    83: ((83, 45, 2, 1, 0), ((167, 1), (57912614113275649087721, 1))),
    84: ((84, 13, 0), ((3, 2), (5, 1), (7, 2), (13, 1), (29, 1), (43, 1), (113, 1), (127, 1), (337, 1), (1429, 1), (5419, 1), (14449, 1))),
    85: ((85, 8, 2, 1, 0), ((31, 1), (131071, 1), (9520972806333758431, 1))),
    86: ((86, 7, 2, 1, 0), ((3, 1), (431, 1), (9719, 1), (2099863, 1), (2932031007403, 1))),
    87: ((87, 13, 0), ((7, 1), (233, 1), (1103, 1), (2089, 1), (4177, 1), (9857737155463, 1))),
    88: ((88, 66, 5, 1, 0), ((3, 1), (5, 1), (17, 1), (23, 1), (89, 1), (353, 1), (397, 1), (683, 1), (2113, 1), (2931542417, 1))),
    89: ((89, 38, 0), ((618970019642690137449562111, 1),)),
    90: ((90, 26, 2, 1, 0), ((3, 3), (7, 1), (11, 1), (19, 1), (31, 1), (73, 1), (151, 1), (331, 1), (631, 1), (23311, 1), (18837001, 1))),
    91: ((91, 21, 2, 1, 0), ((127, 1), (911, 1), (8191, 1), (112901153, 1), (23140471537, 1))),
    92: ((92, 18, 2, 1, 0), ((3, 1), (5, 1), (47, 1), (277, 1), (1013, 1), (1657, 1), (30269, 1), (178481, 1), (2796203, 1))),
    93: ((93, 2, 0), ((7, 1), (2147483647, 1), (658812288653553079, 1))),
    94: ((94, 21, 0), ((3, 1), (283, 1), (2351, 1), (4513, 1), (13264529, 1), (165768537521, 1))),
    95: ((95, 11, 0), ((31, 1), (191, 1), (524287, 1), (420778751, 1), (30327152671, 1))),
    96: ((96, 19, 2, 1, 0), ((3, 2), (5, 1), (7, 1), (13, 1), (17, 1), (97, 1), (193, 1), (241, 1), (257, 1), (673, 1), (65537, 1), (22253377, 1))),
    97: ((97, 6, 0), ((11447, 1), (13842607235828485645766393, 1))),
    98: ((98, 11, 0), ((3, 1), (43, 1), (127, 1), (4363953127297, 1), (4432676798593, 1))),
    99: ((99, 40, 3, 1, 0), ((7, 1), (23, 1), (73, 1), (89, 1), (199, 1), (153649, 1), (599479, 1), (33057806959, 1))),
    100: ((100, 37, 0), ((3, 1), (5, 3), (11, 1), (31, 1), (41, 1), (101, 1), (251, 1), (601, 1), (1801, 1), (4051, 1), (8101, 1), (268501, 1))),
    101: ((101, 39, 2, 1, 0), ((7432339208719, 1), (341117531003194129, 1))),
    102: ((102, 31, 2, 1, 0), ((3, 2), (7, 1), (103, 1), (307, 1), (2143, 1), (2857, 1), (6529, 1), (11119, 1), (43691, 1), (131071, 1))),
    103: ((103, 9, 0), ((2550183799, 1), (3976656429941438590393, 1))),
    104: ((104, 27, 2, 1, 0), ((3, 1), (5, 1), (17, 1), (53, 1), (157, 1), (1613, 1), (2731, 1), (8191, 1), (858001, 1), (308761441, 1))),
    105: ((105, 16, 0), ((7, 2), (31, 1), (71, 1), (127, 1), (151, 1), (337, 1), (29191, 1), (106681, 1), (122921, 1), (152041, 1))),
    106: ((106, 15, 0), ((3, 1), (107, 1), (6361, 1), (69431, 1), (20394401, 1), (28059810762433, 1))),
    107: ((107, 58, 2, 1, 0), ((162259276829213363391578010288127, 1),)),
    108: ((108, 31, 0), ((3, 4), (5, 1), (7, 1), (13, 1), (19, 1), (37, 1), (73, 1), (109, 1), (87211, 1), (246241, 1), (262657, 1), (279073, 1))),
    109: ((109, 9, 2, 1, 0), ((745988807, 1), (870035986098720987332873, 1))),
    110: ((110, 53, 3, 1, 0), ((3, 1), (11, 2), (23, 1), (31, 1), (89, 1), (683, 1), (881, 1), (2971, 1), (3191, 1), (201961, 1), (48912491, 1))),
    111: ((111, 10, 0), ((7, 1), (223, 1), (321679, 1), (26295457, 1), (319020217, 1), (616318177, 1))),
    112: ((112, 63, 2, 1, 0), ((3, 1), (5, 1), (17, 1), (29, 1), (43, 1), (113, 1), (127, 1), (257, 1), (5153, 1), (15790321, 1), (54410972897, 1))),
    113: ((113, 9, 0), ((3391, 1), (23279, 1), (65993, 1), (1868569, 1), (1066818132868207, 1))),
    114: ((114, 11, 2, 1, 0), ((3, 2), (7, 1), (571, 1), (32377, 1), (174763, 1), (524287, 1), (1212847, 1), (160465489, 1))),
    115: ((115, 32, 2, 1, 0), ((31, 1), (47, 1), (14951, 1), (178481, 1), (4036961, 1), (2646507710984041, 1))),
    116: ((116, 48, 2, 1, 0), ((3, 1), (5, 1), (59, 1), (233, 1), (1103, 1), (2089, 1), (3033169, 1), (107367629, 1), (536903681, 1))),
    117: ((117, 5, 2, 1, 0), ((7, 1), (73, 1), (79, 1), (937, 1), (6553, 1), (8191, 1), (86113, 1), (121369, 1), (7830118297, 1))),
    118: ((118, 33, 0), ((3, 1), (2833, 1), (37171, 1), (179951, 1), (1824726041, 1), (3203431780337, 1))),
    119: ((119, 8, 0), ((127, 1), (239, 1), (20231, 1), (131071, 1), (62983048367, 1), (131105292137, 1))),
    120: ((120, 49, 2, 1, 0), ((3, 2), (5, 2), (7, 1), (11, 1), (13, 1), (17, 1), (31, 1), (41, 1), (61, 1), (151, 1), (241, 1), (331, 1), (1321, 1), (61681, 1), (4562284561, 1))),
    121: ((121, 18, 0), ((23, 1), (89, 1), (727, 1), (1786393878363164227858270210279, 1))),
    122: ((122, 6, 2, 1, 0), ((3, 1), (768614336404564651, 1), (2305843009213693951, 1))),
    123: ((123, 2, 0), ((7, 1), (13367, 1), (3887047, 1), (164511353, 1), (177722253954175633, 1))),
    124: ((124, 37, 0), ((3, 1), (5, 1), (5581, 1), (8681, 1), (49477, 1), (384773, 1), (715827883, 1), (2147483647, 1))),
    125: ((125, 72, 2, 1, 0), ((31, 1), (601, 1), (1801, 1), (269089806001, 1), (4710883168879506001, 1))),
    126: ((126, 47, 2, 1, 0), ((3, 3), (7, 2), (19, 1), (43, 1), (73, 1), (127, 1), (337, 1), (5419, 1), (92737, 1), (649657, 1), (77158673929, 1))),
    127: ((127, 1, 0), ((170141183460469231731687303715884105727, 1),)),
    128: ((128, 7, 2, 1, 0), ((3, 1), (5, 1), (17, 1), (257, 1), (641, 1), (65537, 1), (274177, 1), (6700417, 1), (67280421310721, 1))),
}
