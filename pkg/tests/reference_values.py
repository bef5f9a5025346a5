"""Reference numbers the acceptance suite reproduces."""

# n: (C, M) averages of one partitioning step over all n! inputs, pivot at n // 2
SWEEP_SIMPLE = {2: ("1.0", "5.5"), 3: ("2.0", "7.0"), 4: ("3.0", "8.5"), 5: ("4.0", "10.0"),
                6: ("5.0", "11.5"), 7: ("6.0", "13.0"), 8: ("7.0", "14.5"), 9: ("8.0", "16.0"),
                10: ("9.0", "17.5")}
CLASSIC_COLLISION = {2: ("2.500", "4.000"), 3: ("3.333", "4.500"), 4: ("4.917", "4.750"),
                     5: ("6.200", "5.200"), 6: ("7.300", "5.600"), 7: ("8.381", "6.071"),
                     8: ("9.423", "6.518"), 9: ("10.460", "7.000"), 10: ("11.483", "7.467")}
NEW_COLLISION = {2: ("1.5", "5.0"), 3: ("2.5", "5.5"), 4: ("3.5", "6.0"), 5: ("4.5", "6.5"),
                 6: ("5.5", "7.0"), 7: ("6.5", "7.5"), 8: ("7.5", "8.0"), 9: ("8.5", "8.5"),
                 10: ("9.5", "9.0")}
SWEEP_EXTENDED = {2: ("3.5", "5.5"), 3: ("5.0", "7.0"), 4: ("6.5", "8.5"), 5: ("8.0", "10.0"),
                  6: ("9.5", "11.5"), 7: ("11.0", "13.0"), 8: ("12.5", "14.5"),
                  9: ("14.0", "16.0"), 10: ("15.5", "17.5")}
CLASSIC_COLLISION_EXTENDED = {2: ("3.500", "2.500"), 3: ("5.667", "3.500"), 4: ("7.333", "4.250"),
                              5: ("8.950", "4.900"), 6: ("10.533", "5.500"),
                              7: ("12.057", "6.143"), 8: ("13.613", "6.679"),
                              9: ("15.111", "7.321"), 10: ("16.653", "7.825")}

# comparison-count histogram of the classic collision scheme at n = 10
CLASSIC_COLLISION_HIST_10 = {10: 756_000, 11: 362_880, 12: 2_509_920}

# average comparisons, keyed by curve label then n
AVERAGES = {
    "1": {1000: 11319, 2000: 25396, 5000: 72630, 10000: 159105},
    "2": {1000: 10884, 2000: 24134, 5000: 68171, 10000: 148211},
    "3": {1000: 10704, 2000: 23590, 5000: 66192, 10000: 143305},
    "4a": {1000: 10713, 2000: 23564, 5000: 66232, 10000: 143578},
    "4b": {1000: 10997, 2000: 24376, 5000: 69039, 10000: 149187},
    "5": {1000: 10394, 2000: 23171, 5000: 66027, 10000: 143165},
}

# bad-case probabilities at n = 500, keyed by model then tau
PROB_500 = {
    1: {1.1: 7.35e-2, 1.25: 2.17e-3, 1.5: 1.88e-6, 2.0: 1.02e-13},
    2: {1.1: 1.14e-2, 1.25: 8.88e-6, 1.5: 5.10e-12, 2.0: 6.66e-27},
    3: {1.1: 2.83e-4, 1.25: 1.28e-10, 1.5: 2.17e-23, 2.0: 3.62e-54},
    5: {1.1: 3.75e-8, 1.25: 2.97e-23, 1.5: 5.12e-53, 2.0: 4.25e-127},
}

# p_500 / p_250
RATIO_500_250 = {
    1: {1.1: 0.78, 1.25: 0.45, 1.5: 0.15, 2.0: 0.012},
    2: {1.1: 0.64, 1.25: 0.26, 1.5: 0.045, 2.0: 9.24e-4},
    3: {1.1: 0.38, 1.25: 0.058, 1.5: 1.89e-3, 2.0: 2.63e-6},
    5: {1.1: 4.44e-4, 1.25: 1.60e-10, 1.5: 2.16e-22, 2.0: 1.90e-51},
}

# expected time to one bad case with one sort per millisecond, n = 500
TIMES_500 = {
    1: {1.1: "0.014 s", 1.25: "0.46 s", 1.5: "8.9 m", 2.0: "312 a"},
    2: {1.1: "0.09 s", 1.25: "1.9 m", 1.5: "6.2 a", 2.0: "4.8e15 a"},
    3: {1.1: "3.5 s", 1.25: "90.5 d", 1.5: "1.5e12 a", 2.0: "8.8e42 a"},
    5: {1.1: "7.4 h", 1.25: "1.1e12 a", 1.5: "6.2e41 a", 2.0: "7.5e115 a"},
}

# comparisons forced by the killer adversary at n = 100,000
ADVERSARY_100K = {1: 2.500e9, 2: 2.500e9, 3: 8.338e8, 4: 2.848e6, 5: 2.768e6}
