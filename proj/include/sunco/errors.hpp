#pragma once

#include <stdexcept>
#include <string>

namespace sunco {

// Every failure mode the library reports deliberately carries one of these
// codes; the CLI maps them onto its exit-code contract.
enum class Err {
    DegenerateSimplex,
    OverlappingInteriors,
    SimplexNotFound,
    PointOutsideComplex,
    NotSubcomplex,
    NotSubcomplexPair,
    DerivationPointOutsideInterior,
    NonPositiveCenterValue,
    PerturbationFailed,
    OvershadowCycle,
    CodimensionTooLow,
    NondegeneracyViolated,
    GeneralPositionFailed,
    InvalidSourceCollapse,
    InvalidSequence,
    StabilizationCertificateFailed,
    VerificationFailed,
    UnknownExample,
    MixedBoundaryContact,
    UnsupportedHost,
    ParseError,
    Internal,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::DegenerateSimplex: return "DegenerateSimplex";
        case Err::OverlappingInteriors: return "OverlappingInteriors";
        case Err::SimplexNotFound: return "SimplexNotFound";
        case Err::PointOutsideComplex: return "PointOutsideComplex";
        case Err::NotSubcomplex: return "NotSubcomplex";
        case Err::NotSubcomplexPair: return "NotSubcomplexPair";
        case Err::DerivationPointOutsideInterior: return "DerivationPointOutsideInterior";
        case Err::NonPositiveCenterValue: return "NonPositiveCenterValue";
        case Err::PerturbationFailed: return "PerturbationFailed";
        case Err::OvershadowCycle: return "OvershadowCycle";
        case Err::CodimensionTooLow: return "CodimensionTooLow";
        case Err::NondegeneracyViolated: return "NondegeneracyViolated";
        case Err::GeneralPositionFailed: return "GeneralPositionFailed";
        case Err::InvalidSourceCollapse: return "InvalidSourceCollapse";
        case Err::InvalidSequence: return "InvalidSequence";
        case Err::StabilizationCertificateFailed: return "StabilizationCertificateFailed";
        case Err::VerificationFailed: return "VerificationFailed";
        case Err::UnknownExample: return "UnknownExample";
        case Err::MixedBoundaryContact: return "MixedBoundaryContact";
        case Err::UnsupportedHost: return "UnsupportedHost";
        case Err::ParseError: return "ParseError";
        case Err::Internal: return "Internal";
    }
    return "?";
}

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
    Err code() const { return code_; }

private:
    Err code_;
};

}  // namespace sunco
