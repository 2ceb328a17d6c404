#pragma once
#include <cmath>
#include <cstdio>
#include <stdexcept>

// Tiny check helpers shared by the plain-main test binaries.  Each failing
// check prints one line; main() returns the failure count via test_summary().

inline int g_checks = 0;
inline int g_fail = 0;

#define CHECK(cond)                                                       \
  do {                                                                    \
    ++g_checks;                                                           \
    if (!(cond)) {                                                        \
      std::printf("FAIL %s:%d  %s\n", __FILE__, __LINE__, #cond);         \
      ++g_fail;                                                           \
    }                                                                     \
  } while (0)

#define CHECK_ABS(got, want, atol)                                        \
  do {                                                                    \
    ++g_checks;                                                           \
    double g_ = (got), w_ = (want);                                       \
    if (!(std::abs(g_ - w_) <= (atol))) {                                 \
      std::printf("FAIL %s:%d  %s = %.17g, want %.17g (abs tol %g)\n",    \
                  __FILE__, __LINE__, #got, g_, w_, (double)(atol));      \
      ++g_fail;                                                           \
    }                                                                     \
  } while (0)

#define CHECK_REL(got, want, rtol)                                        \
  do {                                                                    \
    ++g_checks;                                                           \
    double g_ = (got), w_ = (want);                                       \
    if (!(std::abs(g_ - w_) <= (rtol)*std::abs(w_))) {                    \
      std::printf("FAIL %s:%d  %s = %.17g, want %.17g (rel tol %g)\n",    \
                  __FILE__, __LINE__, #got, g_, w_, (double)(rtol));      \
      ++g_fail;                                                           \
    }                                                                     \
  } while (0)

#define CHECK_THROWS(expr)                                                \
  do {                                                                    \
    ++g_checks;                                                           \
    bool threw_ = false;                                                  \
    try {                                                                 \
      (void)(expr);                                                       \
    } catch (const std::exception&) {                                     \
      threw_ = true;                                                      \
    }                                                                     \
    if (!threw_) {                                                        \
      std::printf("FAIL %s:%d  expected throw: %s\n", __FILE__, __LINE__, \
                  #expr);                                                 \
      ++g_fail;                                                           \
    }                                                                     \
  } while (0)

inline int test_summary(const char* name) {
  std::printf("%s: %d checks, %d failed\n", name, g_checks, g_fail);
  return g_fail ? 1 : 0;
}
