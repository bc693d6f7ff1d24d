#pragma once

#include <stdexcept>
#include <string>

namespace trisum {

// Inputs fail the hypothesis of a theorem or lemma (e.g. the Corollary 1
// mass condition, or a density sum <= 2).  Distinct from malformed input,
// which is reported as std::invalid_argument.
class hypothesis_error : public std::runtime_error {
public:
    explicit hypothesis_error(const std::string& what) : std::runtime_error(what) {}
};

// The prime window [(1+kappa)n/W, (1+2kappa)n/W] contains no prime.
class no_prime_in_window : public std::runtime_error {
public:
    explicit no_prime_in_window(const std::string& what) : std::runtime_error(what) {}
};

// An identity the implementation is obliged to satisfy failed: dual-route
// evaluations disagree, or a solver returned a triple below its guaranteed
// bound.  Either is a bug or a genuine mathematical discovery; callers
// should treat it as fatal.
class internal_check_error : public std::logic_error {
public:
    explicit internal_check_error(const std::string& what) : std::logic_error(what) {}
};

// Wraps any failure inside the transference pipeline with the stage name.
class pipeline_error : public std::runtime_error {
public:
    pipeline_error(std::string stage_name, const std::string& what)
        : std::runtime_error(stage_name + ": " + what), stage_(std::move(stage_name)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace trisum
