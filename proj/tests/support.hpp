// Helpers shared by the unit tests.
#pragma once

#include <string>

#include "shmv/model.hpp"

namespace shmv::test {

inline std::string data_path(const std::string& name) { return std::string(SHMV_TEST_DATA) + "/" + name; }

inline LcrInstance load_lcr(const std::string& name) { return std::get<LcrInstance>(load_instance(data_path(name))); }

inline LcrInstance lcr_from(const std::string& json) { return std::get<LcrInstance>(parse_program(json)); }

inline BsrInstance bsr_from(const std::string& json) { return std::get<BsrInstance>(parse_program(json)); }

} // namespace shmv::test
