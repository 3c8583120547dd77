#include "coarse/error.hpp"

namespace coarse {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NotSquare: return "NotSquare";
    case Errc::NonFinite: return "NonFinite";
    case Errc::Asymmetry: return "Asymmetry";
    case Errc::NegativeDistance: return "NegativeDistance";
    case Errc::NonZeroDiagonal: return "NonZeroDiagonal";
    case Errc::ZeroOffDiagonal: return "ZeroOffDiagonal";
    case Errc::TriangleViolation: return "TriangleViolation";
    case Errc::Disconnected: return "Disconnected";
    case Errc::MixedArity: return "MixedArity";
    case Errc::BadNorm: return "BadNorm";
    case Errc::BadPoint: return "BadPoint";
    case Errc::EmptySet: return "EmptySet";
    case Errc::InvalidWeights: return "InvalidWeights";
    case Errc::NotARetraction: return "NotARetraction";
    case Errc::SupportEscapes: return "SupportEscapes";
    case Errc::NotACover: return "NotACover";
    case Errc::BadMode: return "BadMode";
    case Errc::EmptyMember: return "EmptyMember";
    case Errc::NotTwoSDisjoint: return "NotTwoSDisjoint";
    case Errc::NotAGrid: return "NotAGrid";
    case Errc::ScaleTooSmall: return "ScaleTooSmall";
    case Errc::BadTree: return "BadTree";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::NotRDisjoint: return "NotRDisjoint";
    case Errc::BudgetTooSmall: return "BudgetTooSmall";
    case Errc::Underflow: return "Underflow";
    case Errc::BadEpsilon: return "BadEpsilon";
    case Errc::ScheduleMismatch: return "ScheduleMismatch";
    case Errc::VerificationFailed: return "VerificationFailed";
    case Errc::ModulusDomain: return "ModulusDomain";
    case Errc::BadParams: return "BadParams";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownPoint: return "UnknownPoint";
  }
  return "Unknown";
}

}  // namespace coarse
