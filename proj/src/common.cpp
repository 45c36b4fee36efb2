#include "ngca/common.hpp"

namespace ngca {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::empty_input: return "empty input";
    case Errc::dimension: return "dimension error";
    case Errc::singular_covariance: return "singular covariance";
    case Errc::parse: return "parse error";
    case Errc::numeric: return "numeric error";
    case Errc::configuration: return "configuration error";
    case Errc::rank_deficiency: return "rank deficiency";
    case Errc::metric: return "metric error";
    case Errc::insufficient_functions: return "insufficient functions";
    case Errc::frame_mismatch: return "frame mismatch";
    case Errc::fit: return "fit error";
    case Errc::io: return "I/O error";
  }
  return "unknown error";
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed derive_seed(Seed parent, std::uint64_t salt) {
  return Seed{mix64(parent.value ^ mix64(salt))};
}

std::string_view to_string(Frame frame) {
  return frame == Frame::whitened ? "whitened" : "original";
}

Frame frame_from_string(std::string_view text) {
  if (text == "whitened") return Frame::whitened;
  if (text == "original") return Frame::original;
  throw Error(Errc::parse, "unknown subspace frame '" + std::string(text) + "'");
}

void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what) {
  if (!m.allFinite()) {
    throw Error(Errc::numeric, std::string(what) + " contains non-finite values");
  }
}

}  // namespace ngca
