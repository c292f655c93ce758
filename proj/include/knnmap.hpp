#pragma once

#include "knnmap/classify.hpp"
#include "knnmap/embedding.hpp"
#include "knnmap/errors.hpp"
#include "knnmap/flagmap.hpp"
#include "knnmap/knn.hpp"
#include "knnmap/numthy.hpp"
#include "knnmap/perm.hpp"
#include "knnmap/serialize.hpp"
