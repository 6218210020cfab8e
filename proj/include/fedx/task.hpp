#pragma once

namespace fedx {

enum class TaskKind { SingleLabel, MultiLabel };

inline const char* task_kind_name(TaskKind t) {
  return t == TaskKind::SingleLabel ? "single_label" : "multi_label";
}

}  // namespace fedx
