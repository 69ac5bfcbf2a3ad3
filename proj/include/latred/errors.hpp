#pragma once

#include <stdexcept>
#include <string>

namespace latred {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class SingularBasis : public Error {
public:
    explicit SingularBasis(const std::string& what = "basis columns are linearly dependent")
        : Error(what) {}
};

class ZeroVector : public Error {
public:
    explicit ZeroVector(const std::string& what = "operation undefined on the zero vector")
        : Error(what) {}
};

class RankOne : public Error {
public:
    explicit RankOne(const std::string& what = "operation requires rank >= 2") : Error(what) {}
};

class EnumerationBudgetExceeded : public Error {
public:
    explicit EnumerationBudgetExceeded(const std::string& what) : Error(what) {}
};

class NoPrimeInRange : public Error {
public:
    explicit NoPrimeInRange(const std::string& what) : Error(what) {}
};

class NoSolution : public Error {
public:
    explicit NoSolution(const std::string& what) : Error(what) {}
};

// Strict-mode oracles refuse queries whose promise does not hold.
class PromiseViolated : public Error {
public:
    explicit PromiseViolated(const std::string& what) : Error(what) {}
};

class InfinityNormUnsupported : public Error {
public:
    explicit InfinityNormUnsupported(const std::string& what = "f_p is undefined for p = inf")
        : Error(what) {}
};

class NoLayerOneSample : public Error {
public:
    explicit NoLayerOneSample(const std::string& what = "no sample with last coordinate 1")
        : Error(what) {}
};

class AllTrialsFailed : public Error {
public:
    explicit AllTrialsFailed(const std::string& what) : Error(what) {}
};

class DegenerateAfterRetries : public Error {
public:
    explicit DegenerateAfterRetries(const std::string& what) : Error(what) {}
};

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

}  // namespace latred
