import json
from pathlib import Path
from typing import Optional, Union

from jinja2 import BaseLoader, Environment, StrictUndefined, Template, TemplateError

from src.config.settings import settings
from src.logger.logger import logger
from src.utils.exceptions import ConfigError


class PromptTemplate:
    """Prompt模板管理

    模板统一存放在 templates.json 中，键为模板名，值为 jinja2 模板文本。
    缺少变量时直接报错，不会静默渲染成空串。
    """

    FILE_NAME = "templates.json"

    def __init__(self, template_dir: Optional[Union[str, Path]] = None):
        """初始化Prompt模板管理器"""
        self.template_dir = Path(template_dir or settings.PROMPT_DIR)
        self.templates: dict[str, str] = {}
        self.env = Environment(loader=BaseLoader(), undefined=StrictUndefined, keep_trailing_newline=True)
        self._load_templates()

    def _load_templates(self) -> None:
        """加载模板文件"""
        path = self.template_dir / self.FILE_NAME
        try:
            self.templates = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"加载模板文件失败: {path}, 错误: {e}")
            raise ConfigError(f"无法加载提示词模板: {path}") from e
        logger.debug(f"已加载 {len(self.templates)} 个提示词模板")

    def names(self) -> list[str]:
        return sorted(self.templates)

    def get_template(self, name: str) -> Template:
        """获取指定名称的模板"""
        template_str = self.templates.get(name)
        if template_str is None:
            raise ConfigError(f"提示词模板不存在: {name}")
        return self.env.from_string(template_str)

    def render(self, template_name: str, **kwargs: object) -> str:
        """渲染指定模板"""
        template = self.get_template(template_name)
        try:
            return template.render(**kwargs)
        except TemplateError as e:
            logger.error(f"渲染模板失败: {template_name}, 错误: {e}")
            raise ConfigError(f"提示词模板 {template_name} 渲染失败: {e}") from e


__all__ = ["PromptTemplate"]
