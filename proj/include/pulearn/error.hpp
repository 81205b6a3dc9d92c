#pragma once

#include <stdexcept>
#include <string>

namespace pulearn {

// Every distinct failure mode named by the library carries one of these
// codes so callers and tests can tell them apart without parsing text.
enum class Errc {
  missing_file,
  non_numeric_cell,
  single_class,
  dimension_mismatch,
  invalid_label,
  empty_input,
  score_out_of_range,
  no_labeled_positives,
  too_small_to_stratify,
  invalid_argument,
  io_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::missing_file: return "missing_file";
    case Errc::non_numeric_cell: return "non_numeric_cell";
    case Errc::single_class: return "single_class";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::invalid_label: return "invalid_label";
    case Errc::empty_input: return "empty_input";
    case Errc::score_out_of_range: return "score_out_of_range";
    case Errc::no_labeled_positives: return "no_labeled_positives";
    case Errc::too_small_to_stratify: return "too_small_to_stratify";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace pulearn
