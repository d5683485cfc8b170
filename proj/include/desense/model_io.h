// Copyright 2026 The Desense Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DESENSE_MODEL_IO_H_
#define DESENSE_MODEL_IO_H_

#include <filesystem>
#include <iosfwd>

#include "desense/rdca.h"
#include "desense/svm.h"

namespace desense {

// Versioned text containers. Every real is written with 17 significant
// digits, so write followed by read reproduces the model bit for bit.
//
//   desense-rdca 1
//   label <name>
//   classes <L>
//   <one class name per line>
//   dims <M>
//   ridge <r>
//   mean <M reals>
//   powers <M reals>
//   components
//   <M lines of M reals, row-major>
//
// The SVM container ("desense-svm 1") stores C, the class count and the
// L x (d+1) weight matrix the same way.
void write_rdca_model(std::ostream& out, const RdcaModel& model);
RdcaModel read_rdca_model(std::istream& in);
void save_rdca_model(const std::filesystem::path& path, const RdcaModel& model);
RdcaModel load_rdca_model(const std::filesystem::path& path);

void write_svm_model(std::ostream& out, const LinearSvmModel& model);
LinearSvmModel read_svm_model(std::istream& in);

}  // namespace desense

#endif  // DESENSE_MODEL_IO_H_
