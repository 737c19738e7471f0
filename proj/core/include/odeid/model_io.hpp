#ifndef ODEID_MODEL_IO_HPP
#define ODEID_MODEL_IO_HPP

#include <filesystem>
#include <string>

#include "odeid/model.hpp"

namespace odeid {

std::string model_to_json(const RecoveredModel &model);
RecoveredModel model_from_json(const std::string &text);

void save_model(const std::filesystem::path &path, const RecoveredModel &model);
RecoveredModel load_model(const std::filesystem::path &path);

} // namespace odeid

#endif
