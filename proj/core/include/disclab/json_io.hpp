#pragma once

#include <string>
#include <variant>
#include <vector>

#include "disclab/covariance.hpp"
#include "disclab/distribution.hpp"
#include "disclab/oracle.hpp"
#include "disclab/reduce_biased.hpp"
#include "disclab/reduce_zero.hpp"
#include "disclab/setsplit.hpp"
#include "disclab/tail_analysis.hpp"

namespace disclab {

// JSON codecs for the file formats. Instances and families are serialized
// with 1-indexed elements and coordinates; parse errors surface as
// Error{validation} with the offending field in the message.

std::string to_json(const SetSplitInstance& instance);
SetSplitInstance instance_from_json(const std::string& text);

std::string to_json(const Assignment& assignment);
Assignment assignment_from_json(const std::string& text);

std::string to_json(const VectorFamily& family);
VectorFamily vector_family_from_json(const std::string& text);

std::string to_json(const BiasedFamily& family);
BiasedFamily biased_family_from_json(const std::string& text);

using AnyFamily = std::variant<VectorFamily, BiasedFamily>;
AnyFamily family_from_json(const std::string& text);

std::string to_json(const SigningDistribution& dist);
SigningDistribution distribution_from_json(const std::string& text);

std::string to_json(const CovarianceReport& report);
std::string to_json(const OracleResult& result);
std::string to_json(const std::vector<CheckLine>& lines);

}  // namespace disclab
