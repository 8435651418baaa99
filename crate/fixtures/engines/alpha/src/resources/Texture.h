#pragma once
#include "base/Ref.h"

// Texture
