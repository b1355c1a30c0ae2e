// SPDX-License-Identifier: Apache-2.0
//
// JSON form of verdicts and probe reports. Numbers are decimal strings so no
// digits are lost; keys keep insertion order for byte-stable output.
#pragma once

#include <cfkit/classify.hpp>

#include <json.hpp>

namespace cfkit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "cfkit/1";

Json to_json(const LimitEstimate& estimate);
Json to_json(const BoundCertificate& certificate);
Json to_json(const DegreeProfile& profile);
Json to_json(const Verdict& verdict);
Json to_json(const ProbeReport& report);

const char* to_string(Trichotomy relation);

}  // namespace cfkit
