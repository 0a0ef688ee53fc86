#pragma once

#include <cstdint>
#include <string_view>

#include "baker/linalg.hpp"

namespace baker {

enum class EnsembleKind { CUE, COE, TwoBlockCOE, TwoBlockCUE, InterpCOEtoCUE, Interp2COEtoCOE, Interp2COEtoCUE };

std::string_view to_string(EnsembleKind kind);
EnsembleKind parse_ensemble_kind(std::string_view name);

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::CUE;
    std::size_t n = 2;
    double t_interp = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
    std::string canonical() const;
};

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) divided out.
UnitaryMatrix haar_unitary(std::size_t n, std::uint64_t seed);

UnitaryMatrix sample(const EnsembleSpec& spec);

/// Principal-branch log of a unitary divided by i: returns the Hermitian H
/// with U = exp(iH), eigenangles taken in (-pi, pi].
CMatrix unitary_log(const CMatrix& u);

/// U0 exp(t log(U0^dagger U1)).
CMatrix geodesic(const CMatrix& u0, const CMatrix& u1, double t);

/// n i.i.d. uniform eigenangles (Poisson spectrum).
SpectrumData uniform_angles(std::size_t n, std::uint64_t seed);

} // namespace baker
