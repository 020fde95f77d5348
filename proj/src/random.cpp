#include "rsim/random.hpp"

#include "rsim/error.hpp"

#include <cmath>

namespace rsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::NotDecomposable: return "NotDecomposable";
    case ErrorCode::LambdaTooSmall: return "LambdaTooSmall";
    case ErrorCode::SingularRouting: return "SingularRouting";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::IntervalContainsEvent: return "IntervalContainsEvent";
    case ErrorCode::NoRegenerationsFound: return "NoRegenerationsFound";
    case ErrorCode::NoCycles: return "NoCycles";
    case ErrorCode::TooFewCycles: return "TooFewCycles";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::InfiniteSecondMoment: return "InfiniteSecondMoment";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ModeUnavailable: return "ModeUnavailable";
  }
  return "Unknown";
}

double Stream::exponential(double rate) { return -std::log(uniform()) / rate; }

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication,
                          std::uint64_t cls, std::uint64_t purpose) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ replication);
  h = mix64(h ^ (cls + 0x100));
  h = mix64(h ^ (purpose + 0x10000));
  return h;
}

}  // namespace rsim
