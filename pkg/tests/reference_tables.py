"""Published values that the library is checked against."""

ROWS = (11, 13, 101, 199, 499, 1009, 1999, 2503, 4999, 10007, 12503, 14939)

# counts in G(p) for p = 5, 7, 11, 13, 17
CENSUS_PRIMES = (5, 7, 11, 13, 17)
CENSUS = {
    "2": (3, 15, 135, 1485, 22275),
    "2,4": (2, 8, 64, 640, 8960),
    "6": (2, 14, 142, 1690, 26630),
    "2,4,2": (1, 3, 21, 189, 2457),
    "2,6": (1, 5, 43, 451, 6503),
    "8": (0, 2, 28, 394, 6812),
    "2,10,2": (0, 2, 20, 216, 3096),
}

# actual counts among primes in [p, p^2]
C = {
    "2": (8, 9, 202, 574, 2557, 8278, 26777, 39326, 130343, 440666, 653634, 895790),
    "6": (7, 10, 296, 898, 4099, 13715, 44785, 66333, 223691, 769389, 1146148, 1576337),
    "8": (2, 1, 104, 335, 1672, 5643, 18762, 27924, 96283, 334491, 499702, 689398),
    "2,4,2": (2, 1, 10, 20, 56, 167, 459, 620, 1714, 4760, 6657, 8777),
    "2,10,2": (0, 1, 18, 35, 118, 325, 873, 1249, 3621, 10502, 14872, 19556),
    "2,10,2,10,2": (0, 0, 1, 2, 5, 10, 25, 38, 84, 212, 300, 378),
}

# sieve estimates
E = {
    "2": (8, 9, 181, 530, 2470, 8217, 26742, 39558, 133426, 457406, 681311, 936917),
    "6": (7, 10, 286, 878, 4263, 14521, 48159, 71628, 245166, 850965, 1271986, 1753990),
    "8": (1, 2, 96, 312, 1579, 5506, 18601, 27811, 96528, 338959, 508315, 702709),
    "2,4,2": (2, 1, 9, 20, 67, 182, 490, 683, 1948, 5712, 8118, 10753),
    "2,10,2": (0, 1, 16, 37, 135, 377, 1041, 1464, 4255, 12686, 18113, 24079),
    "2,10,2,10,2": (0, 0, 1, 2, 6, 13, 29, 39, 95, 243, 331, 424),
}

# Hardy-Littlewood estimates
HL = {
    "2": (4, 6, 152, 457, 2112, 6997, 22788, 33717, 113623, 389427, 579620, 797157),
    "2,4,2": (0, 0, 5, 12, 42, 114, 308, 431, 1228, 3604, 5114, 6777),
}

G5 = (6, 4, 2, 4, 2, 4, 6, 2)
G7 = (10, 2, 4, 2, 4, 6, 2, 6, 4, 2, 4, 6, 6, 2, 6, 4, 2, 6, 4, 6, 8, 4, 2, 4,
      2, 4, 8, 6, 4, 6, 2, 4, 6, 2, 6, 6, 4, 2, 4, 6, 2, 6, 4, 2, 4, 2, 10, 2)

C2_DIGITS = "0.6601618"
C4_DIGITS = "0.30749"
