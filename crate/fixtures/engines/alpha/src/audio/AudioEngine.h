#pragma once
#include "base/Ref.h"

// AudioEngine
