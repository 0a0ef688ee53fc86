#pragma once

// LAPACKE with std::complex<double> as its complex type, so Eigen storage can
// be passed straight through.
#include <complex>
#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>
