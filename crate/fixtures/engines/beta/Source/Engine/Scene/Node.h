#pragma once
#include <Engine/Core/Object.h>

// Node
